import { ApiClient } from "./api.js";
import {
  AvailabilityMode,
  DEFAULT_STATE,
  Mode,
  ViewState,
  normalizeSelection,
} from "./state.js";
import type { ProvenanceTag } from "./types.js";

/** Highlight applied to the rendering; ids come verbatim from the API. */
export interface Highlight {
  mode: Mode;
  ids: Set<string>;
  provenance: Record<string, ProvenanceTag>;
}

export interface ControllerEvents {
  onChange: (state: ViewState, highlight: Highlight | null) => void;
  onNotice?: (message: string) => void;
}

/**
 * State machine between the page and the API. It owns the view state and the
 * current highlight, performs no graph computation of its own (every
 * highlight set is taken verbatim from an API response), and keeps at most
 * one availability request in flight (latest wins).
 */
export class ExplorerController {
  state: ViewState = { ...DEFAULT_STATE };
  highlight: Highlight | null = null;
  private requestToken = 0;

  constructor(
    private api: ApiClient,
    private events: ControllerEvents
  ) {}

  /** Lineage mode: focus a node and highlight its ascendants/descendants. */
  async clickNode(id: string): Promise<void> {
    if (this.state.mode !== "lineage") return;
    this.state = { ...this.state, focus: id };
    const token = ++this.requestToken;
    try {
      const lineage = await this.api.lineage(id);
      if (token !== this.requestToken) return;
      this.highlight = {
        mode: "lineage",
        ids: new Set([...lineage.ascendants, ...lineage.descendants, lineage.focus]),
        provenance: {},
      };
    } catch (err) {
      if (token !== this.requestToken) return;
      this.notice(`lineage request failed: ${String(err)}`);
      return;
    }
    this.emit();
  }

  /** Resources mode: flip one node in the selection and re-query. */
  async toggleResource(id: string): Promise<void> {
    if (this.state.mode !== "resources") return;
    const selected = new Set(this.state.selected);
    if (selected.has(id)) {
      selected.delete(id);
    } else {
      selected.add(id);
    }
    await this.applySelection(normalizeSelection(selected));
  }

  async setAvailabilityMode(mode: AvailabilityMode): Promise<void> {
    if (this.state.availabilityMode === mode) return;
    this.state = { ...this.state, availabilityMode: mode };
    if (this.state.mode === "resources") {
      await this.applySelection(this.state.selected);
    } else {
      this.emit();
    }
  }

  async setMode(mode: Mode): Promise<void> {
    if (this.state.mode === mode) return;
    this.state = { ...this.state, mode };
    await this.refresh();
  }

  setLegendVisible(visible: boolean): void {
    this.state = { ...this.state, legendVisible: visible };
    this.emit();
  }

  /** Adopt a full state (e.g. decoded from the URL fragment) and re-query. */
  async applyState(state: ViewState): Promise<void> {
    this.state = { ...state, selected: normalizeSelection(state.selected) };
    await this.refresh();
  }

  /** Recompute the highlight for the current state via the API. */
  async refresh(): Promise<void> {
    if (this.state.mode === "lineage") {
      if (this.state.focus) {
        await this.clickNode(this.state.focus);
      } else {
        this.highlight = null;
        this.emit();
      }
      return;
    }
    await this.applySelection(this.state.selected);
  }

  private async applySelection(selected: string[]): Promise<void> {
    const previous = this.state.selected;
    this.state = { ...this.state, selected };
    if (selected.length === 0) {
      this.highlight = { mode: "resources", ids: new Set(), provenance: {} };
      this.emit();
      return;
    }
    const token = ++this.requestToken;
    try {
      const result = await this.api.available(selected, this.state.availabilityMode);
      if (token !== this.requestToken) return;
      this.highlight = {
        mode: "resources",
        ids: new Set(result.available),
        provenance: result.provenance,
      };
    } catch (err) {
      if (token !== this.requestToken) return;
      // keep the previous highlight; roll the selection back so the
      // checkboxes stay consistent with what is shown
      this.state = { ...this.state, selected: previous };
      this.notice(`availability request failed: ${String(err)}`);
      this.emit();
      return;
    }
    this.emit();
  }

  private emit(): void {
    this.events.onChange(this.state, this.highlight);
  }

  private notice(message: string): void {
    this.events.onNotice?.(message);
  }
}
