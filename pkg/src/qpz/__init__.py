"""Dependency-graph toolkit for quantum network protocols.

The package models functionalities, protocols, protocol parties, nodal
subroutines and physical resources as a validated acyclic dependency graph,
and answers lineage, availability and ranking queries over a corpus file.
"""

from .corpus import (
    CorpusDocument,
    CorpusError,
    NodeRecord,
    PartySpec,
    load_corpus,
    load_corpus_text,
    lower_to_graph,
    parse_corpus,
    serialize_corpus,
)
from .graph import (
    GraphValidationError,
    KnowledgeGraph,
    UnknownNodeError,
    ascendants,
    build_graph,
    descendants,
    validate,
)
from .model import (
    CategoryTags,
    Edge,
    EdgeKind,
    FunctionalityPage,
    NetworkStage,
    Node,
    NodeKind,
    ProtocolPage,
    ValidationReport,
    Violation,
)
from .queries import (
    AvailabilityResult,
    LineageResult,
    PartyProfile,
    available,
    centrality,
    filter_by_stage,
    infer_stage,
    lineage,
    party_profiles,
)

__version__ = "0.1.0"

__all__ = [
    "AvailabilityResult",
    "CategoryTags",
    "CorpusDocument",
    "CorpusError",
    "Edge",
    "EdgeKind",
    "FunctionalityPage",
    "GraphValidationError",
    "KnowledgeGraph",
    "LineageResult",
    "NetworkStage",
    "Node",
    "NodeKind",
    "NodeRecord",
    "PartyProfile",
    "PartySpec",
    "ProtocolPage",
    "UnknownNodeError",
    "ValidationReport",
    "Violation",
    "ascendants",
    "available",
    "build_graph",
    "centrality",
    "descendants",
    "filter_by_stage",
    "infer_stage",
    "lineage",
    "load_corpus",
    "load_corpus_text",
    "lower_to_graph",
    "parse_corpus",
    "party_profiles",
    "serialize_corpus",
    "validate",
]
