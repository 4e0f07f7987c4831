import type { ExplorerController, Highlight } from "./controller.js";
import type { ViewState } from "./state.js";
import type { VizDocument } from "./types.js";

/**
 * Checkbox list of the atomic functions (resources and subroutines),
 * alphabetical by label. Each toggle sends the full current selection to the
 * availability endpoint through the controller; a badge next to each entry
 * shows its provenance inside the current highlight.
 */
export class ResourcePanel {
  private rows = new Map<string, { checkbox: HTMLInputElement; badge: HTMLElement }>();

  constructor(container: HTMLElement, doc: VizDocument, controller: ExplorerController) {
    const atoms = doc.nodes
      .filter((node) => node.kind === "resource" || node.kind === "subroutine")
      .sort((a, b) => a.label.localeCompare(b.label));
    container.innerHTML = "";
    for (const atom of atoms) {
      const row = document.createElement("label");
      row.className = "resource-row";
      const checkbox = document.createElement("input");
      checkbox.type = "checkbox";
      checkbox.value = atom.id;
      checkbox.addEventListener("change", () => {
        void controller.toggleResource(atom.id);
      });
      const badge = document.createElement("span");
      badge.className = "prov-badge";
      const text = document.createElement("span");
      text.textContent = atom.label;
      text.title = atom.id;
      row.append(checkbox, badge, text);
      container.appendChild(row);
      this.rows.set(atom.id, { checkbox, badge });
    }
  }

  update(state: ViewState, highlight: Highlight | null): void {
    const selected = new Set(state.selected);
    const provenance = highlight?.mode === "resources" ? highlight.provenance : {};
    for (const [id, row] of this.rows) {
      row.checkbox.checked = selected.has(id);
      const tag = provenance[id] ?? "";
      row.badge.textContent = tag;
      row.badge.className = `prov-badge${tag ? ` prov-${tag}` : ""}`;
    }
  }
}
