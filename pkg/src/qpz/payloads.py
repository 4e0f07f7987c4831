"""Canonical JSON payloads shared by the CLI and the HTTP service.

Canonical form: UTF-8, keys sorted, two-space indentation, trailing newline;
set-valued arrays are sorted before serialization. Ranking arrays keep their
rank order.
"""

from __future__ import annotations

import json

from . import queries
from .graph import KnowledgeGraph
from .model import FunctionalityPage, ProtocolPage


def canonical_json(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def lineage_payload(result: queries.LineageResult) -> dict:
    return {
        "focus": result.focus,
        "ascendants": sorted(result.ascendants),
        "descendants": sorted(result.descendants),
    }


def availability_payload(result: queries.AvailabilityResult, with_mode: bool = False) -> dict:
    payload = {
        "available": sorted(result.available),
        "provenance": dict(sorted(result.provenance.items())),
    }
    if with_mode:
        payload["mode"] = result.mode
    return payload


def centrality_payload(ranked: list[tuple[str, int]]) -> list[dict]:
    return [{"id": node_id, "degree": degree} for node_id, degree in ranked]


def parties_payload(profiles: list[queries.PartyProfile]) -> list[dict]:
    return [
        {
            "name": profile.name,
            "party": profile.party_id,
            "subroutines": list(profile.subroutines),
            "resources": list(profile.resources),
            "stage": profile.stage.label,
            "stage_ordinal": int(profile.stage),
        }
        for profile in profiles
    ]


def stage_payload(graph: KnowledgeGraph, node_id: str) -> dict:
    stage = queries.infer_stage(graph, node_id)
    return {"id": node_id, "stage": stage.label, "ordinal": int(stage)}


def node_payload(graph: KnowledgeGraph, node_id: str) -> dict:
    """Full node record including page and tags (nulls where absent)."""
    node = graph.node(node_id)
    tags = None
    if node.tags is not None:
        tags = {
            key: value
            for key, value in (
                ("use_case", node.tags.use_case),
                ("parties", node.tags.parties),
                ("applicability", node.tags.applicability),
                ("methodology_stage", node.tags.methodology_stage),
            )
            if value is not None
        }
    page = None
    if isinstance(node.page, FunctionalityPage):
        page = {
            "description": node.page.description,
            "use_case": node.page.use_case,
            "protocols": list(node.page.protocols),
            "properties": list(node.page.properties),
            "further_information": node.page.further_information,
        }
    elif isinstance(node.page, ProtocolPage):
        page = {
            "abstract": node.page.abstract,
            "assumptions": list(node.page.assumptions),
            "requirements": node.page.requirements,
            "properties": list(node.page.properties),
            "description": list(node.page.description),
            "further_information": node.page.further_information,
        }
    return {
        "id": node.id,
        "kind": node.kind.value,
        "label": node.label,
        "stage": node.stage.label if node.stage is not None else None,
        "inferred_stage": queries.infer_stage(graph, node_id).label,
        "tags": tags,
        "page": page,
    }


def stats_payload(graph: KnowledgeGraph) -> dict:
    by_kind: dict[str, int] = {}
    by_stage: dict[str, int] = {}
    for node_id, node in graph.nodes.items():
        by_kind[node.kind.value] = by_kind.get(node.kind.value, 0) + 1
        label = queries.infer_stage(graph, node_id).label
        by_stage[label] = by_stage.get(label, 0) + 1
    return {
        "nodes": len(graph.nodes),
        "edges": len(graph.edges),
        "by_kind": dict(sorted(by_kind.items())),
        "by_stage": dict(sorted(by_stage.items())),
    }
