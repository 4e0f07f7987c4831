"""Deterministic visualization exports: viz JSON and DOT.

Node colors follow the six-stage legend; node size distinguishes atomic
functions (resources and subroutines, drawn large) from everything else.
Highlight sets are computed by the queries module, never re-derived here.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import queries
from .graph import KnowledgeGraph
from .model import NetworkStage, NodeKind

STAGE_COLORS = {
    NetworkStage.CLASSICAL: "#006400",
    NetworkStage.PREPARE_AND_MEASURE: "#2ECC40",
    NetworkStage.TRUSTED_REPEATER: "#FFDC00",
    NetworkStage.ENTANGLEMENT_DISTRIBUTION: "#FF851B",
    NetworkStage.QUANTUM_MEMORY: "#FF4136",
    NetworkStage.QUANTUM_COMPUTING: "#B10DC9",
}

LARGE_KINDS = frozenset({NodeKind.RESOURCE, NodeKind.SUBROUTINE})

LINEAGE = "lineage"
RESOURCES = "resources"


@dataclass(frozen=True)
class Highlight:
    """Requested highlight: a lineage focus or a resource selection."""

    mode: str
    focus: str | None = None
    selected: tuple[str, ...] = ()
    availability_mode: str = queries.PAPER


def export_viz(graph: KnowledgeGraph, highlight: Highlight | None = None) -> dict:
    """Viz JSON document: sorted nodes/edges plus an optional highlight."""
    nodes = []
    for node_id in sorted(graph.nodes):
        node = graph.nodes[node_id]
        stage = queries.infer_stage(graph, node_id)
        nodes.append(
            {
                "id": node.id,
                "label": node.label,
                "kind": node.kind.value,
                "stage": int(stage),
                "color": STAGE_COLORS[stage],
                "size": "large" if node.kind in LARGE_KINDS else "small",
            }
        )
    edges = [
        {"from": e.source, "to": e.target, "kind": e.kind.value}
        for e in sorted(graph.edges, key=lambda e: e.triple())
    ]
    document = {"nodes": nodes, "edges": edges}
    if highlight is not None:
        document["highlight"] = _highlight_payload(graph, highlight)
    return document


def _highlight_payload(graph: KnowledgeGraph, highlight: Highlight) -> dict:
    if highlight.mode == LINEAGE:
        if highlight.focus is None:
            raise ValueError("lineage highlight requires a focus node")
        result = queries.lineage(graph, highlight.focus)
        ids = sorted(result.ascendants | result.descendants | {result.focus})
        return {"mode": LINEAGE, "focus": result.focus, "highlighted": ids}
    if highlight.mode == RESOURCES:
        availability = queries.available(
            graph, highlight.selected, highlight.availability_mode
        )
        return {
            "mode": RESOURCES,
            "selected": sorted(set(highlight.selected)),
            "highlighted": sorted(availability.available),
        }
    raise ValueError(f"unknown highlight mode: {highlight.mode!r}")


def export_dot(graph: KnowledgeGraph) -> str:
    """DOT text with one statement per node and per edge, sorted."""
    lines = ["digraph qpz {"]
    for node_id in sorted(graph.nodes):
        node = graph.nodes[node_id]
        color = STAGE_COLORS[queries.infer_stage(graph, node_id)]
        lines.append(
            f'  {_dot_quote(node.id)} [label={_dot_quote(node.label)}, '
            f'style=filled, fillcolor={_dot_quote(color)}];'
        )
    for edge in sorted(graph.edges, key=lambda e: e.triple()):
        lines.append(
            f"  {_dot_quote(edge.source)} -> {_dot_quote(edge.target)} "
            f"[label={_dot_quote(edge.kind.value)}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_quote(text: str) -> str:
    escaped = text.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'
