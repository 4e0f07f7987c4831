/**
 * View state and its URL-fragment encoding.
 *
 * The whole exploration state lives in the fragment so any view is
 * shareable and reload-stable: `#mode=resources&select=a,b&avail=any-impl`.
 * In lineage mode the selection is ignored; in resources mode the focus is
 * ignored; both are still encoded so round-trips are exact.
 */

export type Mode = "lineage" | "resources";
export type AvailabilityMode = "paper" | "any-impl";

export interface ViewState {
  mode: Mode;
  focus: string | null;
  selected: string[]; // sorted, unique
  availabilityMode: AvailabilityMode;
  legendVisible: boolean;
}

export const DEFAULT_STATE: ViewState = {
  mode: "lineage",
  focus: null,
  selected: [],
  availabilityMode: "paper",
  legendVisible: true,
};

export function normalizeSelection(ids: Iterable<string>): string[] {
  return Array.from(new Set(ids)).filter((id) => id.length > 0).sort();
}

export function encodeFragment(state: ViewState): string {
  const params = new URLSearchParams();
  if (state.mode !== DEFAULT_STATE.mode) params.set("mode", state.mode);
  if (state.focus) params.set("focus", state.focus);
  const selected = normalizeSelection(state.selected);
  if (selected.length > 0) params.set("select", selected.join(","));
  if (state.availabilityMode !== DEFAULT_STATE.availabilityMode) {
    params.set("avail", state.availabilityMode);
  }
  if (!state.legendVisible) params.set("legend", "0");
  const encoded = params.toString();
  return encoded ? `#${encoded}` : "";
}

export function decodeFragment(fragment: string): ViewState {
  const body = fragment.startsWith("#") ? fragment.slice(1) : fragment;
  const params = new URLSearchParams(body);
  const mode = params.get("mode") === "resources" ? "resources" : "lineage";
  const avail = params.get("avail") === "any-impl" ? "any-impl" : "paper";
  const select = params.get("select") ?? "";
  return {
    mode,
    focus: params.get("focus") || null,
    selected: normalizeSelection(select.split(",")),
    availabilityMode: avail,
    legendVisible: params.get("legend") !== "0",
  };
}

export function statesEqual(a: ViewState, b: ViewState): boolean {
  return (
    a.mode === b.mode &&
    a.focus === b.focus &&
    a.availabilityMode === b.availabilityMode &&
    a.legendVisible === b.legendVisible &&
    a.selected.length === b.selected.length &&
    a.selected.every((id, i) => id === b.selected[i])
  );
}
