"""Lineage, availability closure, stage inference and centrality queries.

The availability closure starts from a selected set, adds every descendant
(those must be available too), then grows upward to a fixed point: a direct
ascendant of an available node becomes available once all of its direct
dependency targets are available. In ``any-impl`` mode a functionality needs
only one of its implementations instead of all of them. Only ascendants of
available nodes are ever examined, so a node with no outgoing edges is never
made available vacuously. Termination follows from acyclicity, and the result
is independent of examination order because the rule is monotone.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .graph import KnowledgeGraph, UnknownNodeError
from .model import EdgeKind, NetworkStage, NodeKind

PAPER = "paper"
ANY_IMPL = "any-impl"
MODES = (PAPER, ANY_IMPL)

SELECTED = "selected"
DOWNWARD = "downward"
UPWARD = "upward"


class UnknownModeError(ValueError):
    def __init__(self, mode: str):
        self.mode = mode
        super().__init__(f"unknown availability mode: {mode!r} (expected 'paper' or 'any-impl')")


class NotAProtocolError(ValueError):
    def __init__(self, node_id: str):
        self.node_id = node_id
        super().__init__(f"node {node_id!r} is not a protocol")


@dataclass(frozen=True)
class LineageResult:
    focus: str
    ascendants: frozenset[str]
    descendants: frozenset[str]


@dataclass(frozen=True)
class AvailabilityResult:
    available: frozenset[str]
    provenance: dict[str, str]
    mode: str


@dataclass(frozen=True)
class PartyProfile:
    name: str
    party_id: str
    subroutines: tuple[str, ...]
    resources: tuple[str, ...]
    stage: NetworkStage


def lineage(graph: KnowledgeGraph, node_id: str) -> LineageResult:
    """All ascendants and descendants of one node."""
    return LineageResult(
        focus=node_id,
        ascendants=frozenset(graph.ascendants(node_id)),
        descendants=frozenset(graph.descendants(node_id)),
    )


def available(
    graph: KnowledgeGraph, selected: Iterable[str], mode: str = PAPER
) -> AvailabilityResult:
    """Fixed-point availability closure of a selected node set."""
    if mode not in MODES:
        raise UnknownModeError(mode)
    selected_ids = sorted(set(selected))
    for node_id in selected_ids:
        graph.node(node_id)

    provenance: dict[str, str] = {}
    for node_id in selected_ids:
        provenance[node_id] = SELECTED
    for node_id in selected_ids:
        for descendant in graph.descendants(node_id):
            provenance.setdefault(descendant, DOWNWARD)

    avail = set(provenance)
    frontier = list(avail)
    pending: set[str] = set()
    while frontier:
        for node_id in frontier:
            for edge in graph.in_edges[node_id]:
                if edge.source not in avail:
                    pending.add(edge.source)
        frontier = []
        for candidate in sorted(pending):
            if _becomes_available(graph, candidate, avail, mode):
                avail.add(candidate)
                provenance[candidate] = UPWARD
                frontier.append(candidate)
        pending.difference_update(frontier)

    return AvailabilityResult(
        available=frozenset(avail), provenance=provenance, mode=mode
    )


def _becomes_available(
    graph: KnowledgeGraph, node_id: str, avail: set[str], mode: str
) -> bool:
    edges = graph.out_edges[node_id]
    if mode == ANY_IMPL and graph.nodes[node_id].kind is NodeKind.FUNCTIONALITY:
        impls = [e.target for e in edges if e.kind is EdgeKind.IMPLEMENTED_BY]
        others = [e.target for e in edges if e.kind is not EdgeKind.IMPLEMENTED_BY]
        if impls and not any(t in avail for t in impls):
            return False
        return all(t in avail for t in others)
    return all(e.target in avail for e in edges)


def infer_stage(graph: KnowledgeGraph, node_id: str) -> NetworkStage:
    """Highest stage over the node's own stage and all staged descendants.

    A node with no explicit stage and no staged descendants sits at the
    classical floor.
    """
    node = graph.node(node_id)
    best = node.stage if node.stage is not None else NetworkStage.CLASSICAL
    for descendant in graph.descendants(node_id):
        stage = graph.nodes[descendant].stage
        if stage is not None and stage > best:
            best = stage
    return best


def centrality(
    graph: KnowledgeGraph,
    kinds: NodeKind | Iterable[NodeKind] | None = None,
    top: int | None = None,
) -> list[tuple[str, int]]:
    """Nodes ranked by number of direct dependents (incoming edges).

    ``kinds`` accepts a single kind or several; the selection spanning both
    resources and subroutines covers what the seed corpus calls atomic
    functions.
    """
    if kinds is None:
        wanted = None
    elif isinstance(kinds, NodeKind):
        wanted = {kinds}
    else:
        wanted = set(kinds)
    ranked = [
        (node_id, len(graph.in_edges[node_id]))
        for node_id, node in graph.nodes.items()
        if wanted is None or node.kind in wanted
    ]
    ranked.sort(key=lambda pair: (-pair[1], pair[0]))
    if top is not None:
        ranked = ranked[:top]
    return ranked


def filter_by_stage(graph: KnowledgeGraph, max_stage: NetworkStage) -> set[str]:
    """Protocol nodes whose inferred stage does not exceed ``max_stage``."""
    return {
        node_id
        for node_id, node in graph.nodes.items()
        if node.kind is NodeKind.PROTOCOL and infer_stage(graph, node_id) <= max_stage
    }


def party_profiles(graph: KnowledgeGraph, protocol_id: str) -> list[PartyProfile]:
    """Per-party requirement profiles of a protocol, exposing asymmetry.

    Returns one entry per party node, ordered by party id; protocols whose
    requirements attach directly (no parties) yield an empty list.
    """
    node = graph.node(protocol_id)
    if node.kind is not NodeKind.PROTOCOL:
        raise NotAProtocolError(protocol_id)
    profiles = []
    for edge in graph.out_edges[protocol_id]:
        if edge.kind is not EdgeKind.HAS_PARTY:
            continue
        party_id = edge.target
        subs = sorted(
            e.target for e in graph.out_edges[party_id] if e.kind is EdgeKind.USES_SUBROUTINE
        )
        res = sorted(
            e.target for e in graph.out_edges[party_id] if e.kind is EdgeKind.USES_RESOURCE
        )
        profiles.append(
            PartyProfile(
                name=graph.nodes[party_id].label,
                party_id=party_id,
                subroutines=tuple(subs),
                resources=tuple(res),
                stage=infer_stage(graph, party_id),
            )
        )
    profiles.sort(key=lambda p: p.party_id)
    return profiles
