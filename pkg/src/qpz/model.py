"""Core domain types: node/edge kinds, network stages, nodes and edges.

The dependency graph is normalized so that every edge points in the
"depends-on" direction: the source node requires the target node to be
available. All traversal and availability semantics build on that single
convention.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum, IntEnum

ID_RE = re.compile(r"^[a-z0-9]([a-z0-9-]*[a-z0-9])?$")


class NodeKind(str, Enum):
    FUNCTIONALITY = "functionality"
    PROTOCOL = "protocol"
    PARTY = "party"
    SUBROUTINE = "subroutine"
    RESOURCE = "resource"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


class EdgeKind(str, Enum):
    IMPLEMENTED_BY = "implemented-by"
    REQUIRES_FUNCTIONALITY = "requires-functionality"
    HAS_PARTY = "has-party"
    PARTY_USES_PROTOCOL = "party-uses-protocol"
    USES_SUBROUTINE = "uses-subroutine"
    USES_RESOURCE = "uses-resource"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


# Admissible (source kind, target kind) pairs per edge kind. Anything else is
# a validation error.
EDGE_RULES: dict[EdgeKind, tuple[frozenset[NodeKind], frozenset[NodeKind]]] = {
    EdgeKind.IMPLEMENTED_BY: (
        frozenset({NodeKind.FUNCTIONALITY}),
        frozenset({NodeKind.PROTOCOL}),
    ),
    EdgeKind.REQUIRES_FUNCTIONALITY: (
        frozenset({NodeKind.PROTOCOL}),
        frozenset({NodeKind.FUNCTIONALITY}),
    ),
    EdgeKind.HAS_PARTY: (
        frozenset({NodeKind.PROTOCOL}),
        frozenset({NodeKind.PARTY}),
    ),
    EdgeKind.PARTY_USES_PROTOCOL: (
        frozenset({NodeKind.PARTY}),
        frozenset({NodeKind.PROTOCOL}),
    ),
    EdgeKind.USES_SUBROUTINE: (
        frozenset({NodeKind.PROTOCOL, NodeKind.PARTY}),
        frozenset({NodeKind.SUBROUTINE}),
    ),
    EdgeKind.USES_RESOURCE: (
        frozenset({NodeKind.PROTOCOL, NodeKind.PARTY, NodeKind.SUBROUTINE}),
        frozenset({NodeKind.RESOURCE}),
    ),
}


class NetworkStage(IntEnum):
    """Capability level of quantum-network hardware, totally ordered."""

    CLASSICAL = 0
    PREPARE_AND_MEASURE = 1
    TRUSTED_REPEATER = 2
    ENTANGLEMENT_DISTRIBUTION = 3
    QUANTUM_MEMORY = 4
    QUANTUM_COMPUTING = 5

    @property
    def label(self) -> str:
        return _STAGE_LABELS[self]

    @classmethod
    def from_label(cls, label: str) -> NetworkStage:
        try:
            return _STAGES_BY_LABEL[label]
        except KeyError:
            raise ValueError(f"unknown network stage label: {label!r}") from None


_STAGE_LABELS = {
    NetworkStage.CLASSICAL: "classical",
    NetworkStage.PREPARE_AND_MEASURE: "prepare-and-measure",
    NetworkStage.TRUSTED_REPEATER: "trusted-repeater",
    NetworkStage.ENTANGLEMENT_DISTRIBUTION: "entanglement-distribution",
    NetworkStage.QUANTUM_MEMORY: "quantum-memory",
    NetworkStage.QUANTUM_COMPUTING: "quantum-computing",
}
_STAGES_BY_LABEL = {label: stage for stage, label in _STAGE_LABELS.items()}

USE_CASES = ("fully-quantum", "quantum-enhanced-classical")
PARTY_COUNTS = ("two-party", "multi-party")
APPLICABILITIES = ("universal", "specific", "certification", "building-block")


@dataclass(frozen=True)
class CategoryTags:
    """Classification tags attached to a node.

    ``methodology_stage`` (1..4) is an advisory tag on the coarser four-level
    scale; it never overrides the six-level stage used by stage inference.
    """

    use_case: str | None = None
    parties: str | None = None
    applicability: str | None = None
    methodology_stage: int | None = None


@dataclass(frozen=True)
class FunctionalityPage:
    """Structured description of a functionality (the task to achieve)."""

    description: str
    use_case: str = ""
    protocols: tuple[str, ...] = ()
    properties: tuple[str, ...] = ()
    further_information: str = ""


@dataclass(frozen=True)
class ProtocolPage:
    """Structured description of one protocol design."""

    abstract: str
    assumptions: tuple[str, ...] = ()
    requirements: str = ""
    properties: tuple[str, ...] = ()
    description: tuple[str, ...] = ()
    further_information: str = ""


@dataclass(frozen=True)
class Node:
    """One entity of the resource hierarchy.

    ``stage`` is mandatory for resources and subroutines; for other kinds it
    may be omitted and is then inferable from staged descendants. Instances
    are plain records: raw input may be invalid, and validation happens in
    :func:`qpz.graph.build_graph`.
    """

    id: str
    label: str
    kind: NodeKind
    stage: NetworkStage | None = None
    tags: CategoryTags | None = None
    page: FunctionalityPage | ProtocolPage | None = None


@dataclass(frozen=True)
class Edge:
    """Directed dependency: ``source`` requires ``target``."""

    source: str
    target: str
    kind: EdgeKind

    def triple(self) -> tuple[str, str, str]:
        return (self.source, self.target, self.kind.value)


@dataclass(frozen=True)
class Violation:
    """One validation failure; ``subject`` locates the offending item."""

    code: str
    message: str
    subject: str = ""

    def to_dict(self) -> dict[str, str]:
        return {"code": self.code, "message": self.message, "subject": self.subject}


@dataclass(frozen=True)
class ValidationReport:
    """All violations found in one validation pass (empty means valid)."""

    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> set[str]:
        return {v.code for v in self.violations}


# Violation codes used by graph validation.
DUPLICATE_ID = "duplicate-id"
INVALID_ID = "invalid-id"
MISSING_STAGE = "missing-stage"
UNKNOWN_ENDPOINT = "unknown-endpoint"
FORBIDDEN_EDGE_PAIRING = "forbidden-edge-pairing"
SELF_LOOP = "self-loop"
CYCLE_DETECTED = "cycle-detected"
