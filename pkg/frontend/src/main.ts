import { ApiClient } from "./api.js";
import { ExplorerController } from "./controller.js";
import { ResourcePanel } from "./panel.js";
import { GraphRenderer, renderLegend } from "./renderer.js";
import { decodeFragment, encodeFragment, statesEqual } from "./state.js";

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

function showBanner(message: string): void {
  const banner = el<HTMLDivElement>("banner");
  banner.textContent = message;
  banner.style.display = "block";
}

function flashNotice(message: string): void {
  const notice = el<HTMLDivElement>("notice");
  notice.textContent = message;
  notice.style.display = "block";
  window.setTimeout(() => {
    notice.style.display = "none";
  }, 4000);
}

async function boot(): Promise<void> {
  const api = new ApiClient("");
  let doc;
  try {
    doc = await api.graph();
  } catch (err) {
    showBanner(`failed to load the graph: ${String(err)}`);
    return; // no partial render
  }

  let renderer: GraphRenderer | null = null;
  let panel: ResourcePanel | null = null;
  const modeInputs = document.querySelectorAll<HTMLInputElement>("input[name=mode]");
  const availSelect = el<HTMLSelectElement>("avail-mode");
  const legendBox = el<HTMLInputElement>("legend-toggle");
  const legendEl = el<HTMLDivElement>("legend");
  const infoEl = el<HTMLDivElement>("node-info");

  const controller = new ExplorerController(api, {
    onChange: (state, highlight) => {
      renderer?.applyHighlight(highlight);
      panel?.update(state, highlight);
      for (const input of modeInputs) input.checked = input.value === state.mode;
      availSelect.value = state.availabilityMode;
      availSelect.disabled = state.mode !== "resources";
      legendBox.checked = state.legendVisible;
      legendEl.style.display = state.legendVisible ? "block" : "none";
      const fragment = encodeFragment(state);
      if (window.location.hash !== fragment) {
        history.replaceState(null, "", fragment || "#");
      }
    },
    onNotice: flashNotice,
  });

  renderer = new GraphRenderer(
    el<HTMLElement>("canvas") as unknown as SVGSVGElement,
    doc,
    (id) => {
      void controller.clickNode(id);
      void showNodeInfo(id);
    }
  );
  panel = new ResourcePanel(el<HTMLDivElement>("resources"), doc, controller);
  renderLegend(legendEl, doc);

  async function showNodeInfo(id: string): Promise<void> {
    try {
      const record = await api.node(id);
      infoEl.textContent = JSON.stringify(record, null, 2);
    } catch {
      infoEl.textContent = "";
    }
  }

  for (const input of modeInputs) {
    input.addEventListener("change", () => {
      if (input.checked) void controller.setMode(input.value as "lineage" | "resources");
    });
  }
  availSelect.addEventListener("change", () => {
    void controller.setAvailabilityMode(availSelect.value as "paper" | "any-impl");
  });
  legendBox.addEventListener("change", () => controller.setLegendVisible(legendBox.checked));
  window.addEventListener("hashchange", () => {
    const decoded = decodeFragment(window.location.hash);
    if (!statesEqual(decoded, controller.state)) void controller.applyState(decoded);
  });

  await controller.applyState(decodeFragment(window.location.hash));
}

void boot();
