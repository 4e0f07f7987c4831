/** Wire types mirroring the read-only API of `qpz serve`. */

export interface VizNode {
  id: string;
  label: string;
  kind: "functionality" | "protocol" | "party" | "subroutine" | "resource";
  stage: number;
  color: string;
  size: "large" | "small";
}

export interface VizEdge {
  from: string;
  to: string;
  kind: string;
}

export interface VizDocument {
  nodes: VizNode[];
  edges: VizEdge[];
}

export interface LineageResponse {
  focus: string;
  ascendants: string[];
  descendants: string[];
}

export type ProvenanceTag = "selected" | "downward" | "upward";

export interface AvailableResponse {
  available: string[];
  provenance: Record<string, ProvenanceTag>;
}

export interface StatsResponse {
  nodes: number;
  edges: number;
  by_kind: Record<string, number>;
  by_stage: Record<string, number>;
}

export const STAGE_LABELS = [
  "classical",
  "prepare-and-measure",
  "trusted-repeater",
  "entanglement-distribution",
  "quantum-memory",
  "quantum-computing",
] as const;
