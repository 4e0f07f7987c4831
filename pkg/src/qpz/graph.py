"""Graph construction, validation and basic reachability.

``build_graph`` validates a raw node/edge collection into an immutable
:class:`KnowledgeGraph` with forward/reverse indexes and a deterministic
topological order (Kahn's method, ties broken by ascending id). Validation
collects every violation before failing so corpus authors see the full
picture at once.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable

from .model import (
    CYCLE_DETECTED,
    DUPLICATE_ID,
    EDGE_RULES,
    FORBIDDEN_EDGE_PAIRING,
    ID_RE,
    INVALID_ID,
    MISSING_STAGE,
    SELF_LOOP,
    UNKNOWN_ENDPOINT,
    Edge,
    Node,
    NodeKind,
    ValidationReport,
    Violation,
)


class GraphError(Exception):
    """Base class for graph-layer errors."""


class GraphValidationError(GraphError):
    """Raised by ``build_graph`` when validation fails; carries the report."""

    def __init__(self, report: ValidationReport):
        self.report = report
        lines = "; ".join(v.message for v in report.violations[:5])
        more = len(report.violations) - 5
        if more > 0:
            lines += f"; and {more} more"
        super().__init__(f"invalid graph: {lines}")


class UnknownNodeError(GraphError):
    def __init__(self, node_id: str):
        self.node_id = node_id
        super().__init__(f"unknown node: {node_id}")


@dataclass(frozen=True)
class KnowledgeGraph:
    """Validated immutable DAG over typed nodes and depends-on edges.

    The contained dicts/tuples are never mutated after construction; all
    query operations are pure reads and safe under concurrent access.
    """

    nodes: dict[str, Node]
    edges: tuple[Edge, ...]
    out_edges: dict[str, tuple[Edge, ...]]
    in_edges: dict[str, tuple[Edge, ...]]
    topo_order: tuple[str, ...]

    def node(self, node_id: str) -> Node:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise UnknownNodeError(node_id) from None

    def targets_of(self, node_id: str) -> tuple[str, ...]:
        return tuple(e.target for e in self.out_edges[node_id])

    def descendants(self, node_id: str) -> set[str]:
        """All nodes reachable along depends-on edges, excluding the node."""
        return self._reach(node_id, self.out_edges, forward=True)

    def ascendants(self, node_id: str) -> set[str]:
        """All nodes that transitively depend on the node."""
        return self._reach(node_id, self.in_edges, forward=False)

    def _reach(self, node_id: str, index: dict[str, tuple[Edge, ...]], forward: bool) -> set[str]:
        self.node(node_id)
        seen: set[str] = set()
        stack = [node_id]
        while stack:
            current = stack.pop()
            for edge in index[current]:
                nxt = edge.target if forward else edge.source
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        seen.discard(node_id)
        return seen


def descendants(graph: KnowledgeGraph, node_id: str) -> set[str]:
    return graph.descendants(node_id)


def ascendants(graph: KnowledgeGraph, node_id: str) -> set[str]:
    return graph.ascendants(node_id)


def validate(nodes: Iterable[Node], edges: Iterable[Edge]) -> ValidationReport:
    """Check all graph invariants; returns a report with every violation."""
    violations, _, _ = _validate(list(nodes), list(edges))
    return ValidationReport(tuple(violations))


def build_graph(nodes: Iterable[Node], edges: Iterable[Edge]) -> KnowledgeGraph:
    """Validate and index a graph; raises ``GraphValidationError`` on failure."""
    node_list = list(nodes)
    edge_list = list(edges)
    violations, by_id, unique_edges = _validate(node_list, edge_list)
    if violations:
        raise GraphValidationError(ValidationReport(tuple(violations)))

    ordered_edges = tuple(sorted(unique_edges, key=Edge.triple))
    out_edges: dict[str, list[Edge]] = {i: [] for i in by_id}
    in_edges: dict[str, list[Edge]] = {i: [] for i in by_id}
    for edge in ordered_edges:
        out_edges[edge.source].append(edge)
        in_edges[edge.target].append(edge)

    topo = _kahn_order(by_id, out_edges)
    return KnowledgeGraph(
        nodes=by_id,
        edges=ordered_edges,
        out_edges={i: tuple(es) for i, es in out_edges.items()},
        in_edges={i: tuple(es) for i, es in in_edges.items()},
        topo_order=tuple(topo),
    )


def _validate(
    nodes: list[Node], edges: list[Edge]
) -> tuple[list[Violation], dict[str, Node], list[Edge]]:
    violations: list[Violation] = []

    by_id: dict[str, Node] = {}
    for node in nodes:
        if not isinstance(node.id, str) or not ID_RE.match(node.id):
            violations.append(
                Violation(INVALID_ID, f"node id {node.id!r} is not a valid slug", str(node.id))
            )
            continue
        if node.id in by_id:
            violations.append(Violation(DUPLICATE_ID, f"duplicate node id {node.id!r}", node.id))
            continue
        by_id[node.id] = node

    for node in by_id.values():
        if node.kind in (NodeKind.RESOURCE, NodeKind.SUBROUTINE) and node.stage is None:
            violations.append(
                Violation(
                    MISSING_STAGE,
                    f"{node.kind.value} node {node.id!r} must carry a network stage",
                    node.id,
                )
            )

    unique_edges: list[Edge] = []
    seen_triples: set[tuple[str, str, str]] = set()
    for edge in edges:
        if edge.source == edge.target:
            violations.append(
                Violation(SELF_LOOP, f"self-loop on {edge.source!r} ({edge.kind.value})", edge.source)
            )
            continue
        triple = edge.triple()
        if triple in seen_triples:
            continue  # duplicates carry no information
        seen_triples.add(triple)

        missing = [i for i in (edge.source, edge.target) if i not in by_id]
        if missing:
            for node_id in missing:
                violations.append(
                    Violation(
                        UNKNOWN_ENDPOINT,
                        f"edge {edge.source!r} -> {edge.target!r} ({edge.kind.value}) "
                        f"references unknown node {node_id!r}",
                        node_id,
                    )
                )
            continue

        src_kinds, dst_kinds = EDGE_RULES[edge.kind]
        src_kind = by_id[edge.source].kind
        dst_kind = by_id[edge.target].kind
        if src_kind not in src_kinds or dst_kind not in dst_kinds:
            violations.append(
                Violation(
                    FORBIDDEN_EDGE_PAIRING,
                    f"{edge.kind.value} does not admit {src_kind.value} -> {dst_kind.value} "
                    f"(edge {edge.source!r} -> {edge.target!r})",
                    f"{edge.source}->{edge.target}",
                )
            )
            continue
        unique_edges.append(edge)

    witness = _find_cycle(by_id, unique_edges)
    if witness is not None:
        violations.append(
            Violation(
                CYCLE_DETECTED,
                "dependency cycle: " + " -> ".join(witness),
                ",".join(witness),
            )
        )

    return violations, by_id, unique_edges


def _kahn_order(by_id: dict[str, Node], out_edges: dict[str, list[Edge]]) -> list[str]:
    in_degree = {i: 0 for i in by_id}
    for edges in out_edges.values():
        for edge in edges:
            in_degree[edge.target] += 1
    heap = [i for i, d in in_degree.items() if d == 0]
    heapq.heapify(heap)
    order: list[str] = []
    while heap:
        current = heapq.heappop(heap)
        order.append(current)
        for edge in out_edges[current]:
            in_degree[edge.target] -= 1
            if in_degree[edge.target] == 0:
                heapq.heappush(heap, edge.target)
    return order


def _find_cycle(by_id: dict[str, Node], edges: list[Edge]) -> list[str] | None:
    """Return one witness cycle as [a, ..., a], or None if acyclic.

    The witness is rotated to start at its lexicographically smallest node so
    reports are stable across runs.
    """
    adjacency: dict[str, list[str]] = {i: [] for i in by_id}
    for edge in edges:
        adjacency[edge.source].append(edge.target)
    for targets in adjacency.values():
        targets.sort()

    WHITE, GRAY, BLACK = 0, 1, 2
    color = {i: WHITE for i in by_id}
    parent: dict[str, str] = {}

    for start in sorted(by_id):
        if color[start] != WHITE:
            continue
        stack: list[tuple[str, int]] = [(start, 0)]
        color[start] = GRAY
        while stack:
            current, idx = stack[-1]
            if idx < len(adjacency[current]):
                stack[-1] = (current, idx + 1)
                nxt = adjacency[current][idx]
                if color[nxt] == GRAY:
                    cycle = [nxt]
                    walker = current
                    while walker != nxt:
                        cycle.append(walker)
                        walker = parent[walker]
                    cycle.append(nxt)
                    cycle = cycle[::-1]  # follow edge direction
                    return _rotate_cycle(cycle)
                if color[nxt] == WHITE:
                    color[nxt] = GRAY
                    parent[nxt] = current
                    stack.append((nxt, 0))
            else:
                color[current] = BLACK
                stack.pop()
    return None


def _rotate_cycle(cycle: list[str]) -> list[str]:
    body = cycle[:-1]
    pivot = body.index(min(body))
    rotated = body[pivot:] + body[:pivot]
    return rotated + [rotated[0]]
