"""Corpus file format: strict parsing, lowering to graph input, serialization.

A corpus is a single JSON object ``{"version": 1, "nodes": [...]}``. Node
records declare functionality, protocol, subroutine and resource entities;
party nodes are synthesized from ``parties`` lists during lowering. Parsing
is strict: unknown fields, bad enum values and missing required fields are
reported with path-addressed locations so hand-authored corpora fail loudly.

Reference lists lower to edges as follows:

* ``implements`` on a protocol -> implemented-by edges (functionality -> protocol)
* ``uses_protocols`` on a protocol record -> requires-functionality edges
* ``uses_protocols`` inside a party spec -> party-uses-protocol edges
* ``subroutines`` / ``resources`` -> uses-subroutine / uses-resource edges,
  from the protocol itself or from the synthesized party node
* ``resources`` on a subroutine record -> uses-resource edges

Documents hold node records sorted by id, so serialization is canonical and
``parse(serialize(doc)) == doc``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .graph import KnowledgeGraph, build_graph
from .model import (
    APPLICABILITIES,
    ID_RE,
    PARTY_COUNTS,
    USE_CASES,
    CategoryTags,
    Edge,
    EdgeKind,
    FunctionalityPage,
    NetworkStage,
    Node,
    NodeKind,
    ProtocolPage,
)

CORPUS_VERSION = 1

# Schema error codes.
MALFORMED_SYNTAX = "malformed-syntax"
BAD_VERSION = "bad-version"
UNKNOWN_FIELD = "unknown-field"
MISSING_REQUIRED_FIELD = "missing-required-field"
BAD_ENUM_VALUE = "bad-enum-value"
BAD_TYPE = "bad-type"
BAD_ID = "bad-id"
UNRESOLVED_REFERENCE = "unresolved-reference"


@dataclass(frozen=True)
class SchemaError:
    path: str
    code: str
    message: str

    def to_dict(self) -> dict[str, str]:
        return {"path": self.path, "code": self.code, "message": self.message}


class CorpusError(Exception):
    """Raised when a corpus document cannot be parsed or lowered."""

    def __init__(self, errors: list[SchemaError]):
        self.errors = list(errors)
        head = "; ".join(f"{e.path}: {e.message}" for e in self.errors[:5])
        more = len(self.errors) - 5
        if more > 0:
            head += f"; and {more} more"
        super().__init__(head)


@dataclass(frozen=True)
class PartySpec:
    """One participant role of a protocol and its requirement lists."""

    name: str
    subroutines: tuple[str, ...] = ()
    resources: tuple[str, ...] = ()
    uses_protocols: tuple[str, ...] = ()


@dataclass(frozen=True)
class NodeRecord:
    """One corpus entry; reference lists are lowered to edges."""

    id: str
    kind: NodeKind
    label: str
    stage: NetworkStage | None = None
    tags: CategoryTags | None = None
    page: FunctionalityPage | ProtocolPage | None = None
    implements: tuple[str, ...] = ()
    uses_protocols: tuple[str, ...] = ()
    subroutines: tuple[str, ...] = ()
    resources: tuple[str, ...] = ()
    parties: tuple[PartySpec, ...] = ()
    provenance: str | None = None


@dataclass(frozen=True)
class CorpusDocument:
    version: int = CORPUS_VERSION
    nodes: tuple[NodeRecord, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(sorted(self.nodes, key=lambda r: r.id)))

    def record(self, node_id: str) -> NodeRecord:
        for record in self.nodes:
            if record.id == node_id:
                return record
        raise KeyError(node_id)


_NODE_FIELDS = {
    "id",
    "kind",
    "label",
    "stage",
    "tags",
    "page",
    "implements",
    "uses_protocols",
    "subroutines",
    "resources",
    "parties",
    "provenance",
}
# Reference/structure fields admitted per node kind, beyond the common ones.
_KIND_FIELDS = {
    NodeKind.FUNCTIONALITY: {"page"},
    NodeKind.PROTOCOL: {
        "page",
        "implements",
        "uses_protocols",
        "subroutines",
        "resources",
        "parties",
    },
    NodeKind.SUBROUTINE: {"resources"},
    NodeKind.RESOURCE: set(),
}
_COMMON_FIELDS = {"id", "kind", "label", "stage", "tags", "provenance"}
_TAG_FIELDS = {"use_case", "parties", "applicability", "methodology_stage"}
_PARTY_FIELDS = {"name", "subroutines", "resources", "uses_protocols"}
_FUNCTIONALITY_PAGE_FIELDS = {
    "description",
    "use_case",
    "protocols",
    "properties",
    "further_information",
}
_PROTOCOL_PAGE_FIELDS = {
    "abstract",
    "assumptions",
    "requirements",
    "properties",
    "description",
    "further_information",
}


class _Collector:
    def __init__(self):
        self.errors: list[SchemaError] = []

    def add(self, path: str, code: str, message: str) -> None:
        self.errors.append(SchemaError(path, code, message))


def parse_corpus(data: bytes | str) -> CorpusDocument:
    """Parse and strictly validate a corpus document.

    Raises ``CorpusError`` carrying every schema error found, with
    path-addressed locations like ``nodes[3].page.abstract``.
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorpusError([SchemaError("$", MALFORMED_SYNTAX, f"not valid JSON: {exc}")]) from exc

    errs = _Collector()
    if not isinstance(raw, dict):
        raise CorpusError([SchemaError("$", BAD_TYPE, "top level must be an object")])

    for key in raw:
        if key not in ("version", "nodes"):
            errs.add(key, UNKNOWN_FIELD, f"unknown field {key!r}")
    version = raw.get("version")
    if version is None:
        errs.add("version", MISSING_REQUIRED_FIELD, "missing required field 'version'")
    elif version != CORPUS_VERSION:
        errs.add("version", BAD_VERSION, f"unsupported corpus version {version!r}")

    raw_nodes = raw.get("nodes")
    records: list[NodeRecord] = []
    if raw_nodes is None:
        errs.add("nodes", MISSING_REQUIRED_FIELD, "missing required field 'nodes'")
    elif not isinstance(raw_nodes, list):
        errs.add("nodes", BAD_TYPE, "'nodes' must be an array")
    else:
        for i, raw_node in enumerate(raw_nodes):
            record = _parse_node(raw_node, f"nodes[{i}]", errs)
            if record is not None:
                records.append(record)

    if errs.errors:
        raise CorpusError(errs.errors)
    return CorpusDocument(version=CORPUS_VERSION, nodes=tuple(records))


def _parse_node(raw, path: str, errs: _Collector) -> NodeRecord | None:
    if not isinstance(raw, dict):
        errs.add(path, BAD_TYPE, "node record must be an object")
        return None
    before = len(errs.errors)

    kind = None
    raw_kind = raw.get("kind")
    if raw_kind is None:
        errs.add(f"{path}.kind", MISSING_REQUIRED_FIELD, "missing required field 'kind'")
    elif raw_kind == NodeKind.PARTY.value:
        errs.add(
            f"{path}.kind",
            BAD_ENUM_VALUE,
            "party nodes are synthesized from 'parties' lists and cannot be declared",
        )
    else:
        try:
            kind = NodeKind(raw_kind)
        except ValueError:
            errs.add(f"{path}.kind", BAD_ENUM_VALUE, f"unknown node kind {raw_kind!r}")

    allowed = set(_COMMON_FIELDS)
    if kind is not None:
        allowed |= _KIND_FIELDS[kind]
    for key in raw:
        if key not in _NODE_FIELDS:
            errs.add(f"{path}.{key}", UNKNOWN_FIELD, f"unknown field {key!r}")
        elif kind is not None and key not in allowed:
            errs.add(
                f"{path}.{key}",
                UNKNOWN_FIELD,
                f"field {key!r} does not apply to kind {kind.value!r}",
            )

    node_id = _require_str(raw, "id", path, errs)
    if node_id is not None and not ID_RE.match(node_id):
        errs.add(f"{path}.id", BAD_ID, f"id {node_id!r} is not a lowercase slug")
    label = _require_str(raw, "label", path, errs)

    stage = None
    if "stage" in raw:
        raw_stage = raw["stage"]
        if not isinstance(raw_stage, str):
            errs.add(f"{path}.stage", BAD_TYPE, "'stage' must be a stage label string")
        else:
            try:
                stage = NetworkStage.from_label(raw_stage)
            except ValueError:
                errs.add(f"{path}.stage", BAD_ENUM_VALUE, f"unknown stage label {raw_stage!r}")
    elif kind in (NodeKind.RESOURCE, NodeKind.SUBROUTINE):
        errs.add(
            f"{path}.stage",
            MISSING_REQUIRED_FIELD,
            f"kind {kind.value!r} requires a 'stage'",
        )

    tags = _parse_tags(raw.get("tags"), f"{path}.tags", errs) if "tags" in raw else None
    page = None
    if "page" in raw and kind in (NodeKind.FUNCTIONALITY, NodeKind.PROTOCOL):
        page = _parse_page(raw["page"], kind, f"{path}.page", errs)

    implements = _id_list(raw, "implements", path, errs)
    uses_protocols = _id_list(raw, "uses_protocols", path, errs)
    subroutines = _id_list(raw, "subroutines", path, errs)
    resources = _id_list(raw, "resources", path, errs)
    parties = _parse_parties(raw.get("parties"), f"{path}.parties", errs) if "parties" in raw else ()

    provenance = None
    if "provenance" in raw:
        if isinstance(raw["provenance"], str):
            provenance = raw["provenance"]
        else:
            errs.add(f"{path}.provenance", BAD_TYPE, "'provenance' must be a string")

    if len(errs.errors) > before or kind is None or node_id is None or label is None:
        return None
    return NodeRecord(
        id=node_id,
        kind=kind,
        label=label,
        stage=stage,
        tags=tags,
        page=page,
        implements=implements,
        uses_protocols=uses_protocols,
        subroutines=subroutines,
        resources=resources,
        parties=parties,
        provenance=provenance,
    )


def _require_str(raw: dict, key: str, path: str, errs: _Collector) -> str | None:
    value = raw.get(key)
    if value is None:
        errs.add(f"{path}.{key}", MISSING_REQUIRED_FIELD, f"missing required field {key!r}")
        return None
    if not isinstance(value, str) or not value:
        errs.add(f"{path}.{key}", BAD_TYPE, f"{key!r} must be a nonempty string")
        return None
    return value


def _id_list(raw: dict, key: str, path: str, errs: _Collector) -> tuple[str, ...]:
    if key not in raw:
        return ()
    value = raw[key]
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        errs.add(f"{path}.{key}", BAD_TYPE, f"{key!r} must be an array of id strings")
        return ()
    return tuple(value)


def _str_list(raw: dict, key: str, path: str, errs: _Collector) -> tuple[str, ...]:
    if key not in raw:
        return ()
    value = raw[key]
    if not isinstance(value, list) or not all(isinstance(v, str) and v for v in value):
        errs.add(f"{path}.{key}", BAD_TYPE, f"{key!r} must be an array of nonempty strings")
        return ()
    return tuple(value)


def _opt_str(raw: dict, key: str, path: str, errs: _Collector) -> str:
    value = raw.get(key, "")
    if not isinstance(value, str):
        errs.add(f"{path}.{key}", BAD_TYPE, f"{key!r} must be a string")
        return ""
    return value


def _parse_tags(raw, path: str, errs: _Collector) -> CategoryTags | None:
    if not isinstance(raw, dict):
        errs.add(path, BAD_TYPE, "'tags' must be an object")
        return None
    for key in raw:
        if key not in _TAG_FIELDS:
            errs.add(f"{path}.{key}", UNKNOWN_FIELD, f"unknown tag field {key!r}")
    for key, allowed in (
        ("use_case", USE_CASES),
        ("parties", PARTY_COUNTS),
        ("applicability", APPLICABILITIES),
    ):
        if key in raw and raw[key] not in allowed:
            errs.add(f"{path}.{key}", BAD_ENUM_VALUE, f"{key!r} must be one of {allowed}")
    stage = raw.get("methodology_stage")
    if stage is not None and (not isinstance(stage, int) or not 1 <= stage <= 4):
        errs.add(f"{path}.methodology_stage", BAD_ENUM_VALUE, "'methodology_stage' must be 1..4")
    return CategoryTags(
        use_case=raw.get("use_case"),
        parties=raw.get("parties"),
        applicability=raw.get("applicability"),
        methodology_stage=stage if isinstance(stage, int) else None,
    )


def _parse_page(raw, kind: NodeKind, path: str, errs: _Collector):
    if not isinstance(raw, dict):
        errs.add(path, BAD_TYPE, "'page' must be an object")
        return None
    if kind is NodeKind.FUNCTIONALITY:
        for key in raw:
            if key not in _FUNCTIONALITY_PAGE_FIELDS:
                errs.add(f"{path}.{key}", UNKNOWN_FIELD, f"unknown page field {key!r}")
        description = _require_str(raw, "description", path, errs)
        return FunctionalityPage(
            description=description or "",
            use_case=_opt_str(raw, "use_case", path, errs),
            protocols=_id_list(raw, "protocols", path, errs),
            properties=_str_list(raw, "properties", path, errs),
            further_information=_opt_str(raw, "further_information", path, errs),
        )
    for key in raw:
        if key not in _PROTOCOL_PAGE_FIELDS:
            errs.add(f"{path}.{key}", UNKNOWN_FIELD, f"unknown page field {key!r}")
    abstract = _require_str(raw, "abstract", path, errs)
    return ProtocolPage(
        abstract=abstract or "",
        assumptions=_str_list(raw, "assumptions", path, errs),
        requirements=_opt_str(raw, "requirements", path, errs),
        properties=_str_list(raw, "properties", path, errs),
        description=_str_list(raw, "description", path, errs),
        further_information=_opt_str(raw, "further_information", path, errs),
    )


def _parse_parties(raw, path: str, errs: _Collector) -> tuple[PartySpec, ...]:
    if not isinstance(raw, list):
        errs.add(path, BAD_TYPE, "'parties' must be an array")
        return ()
    specs = []
    names = set()
    for i, raw_party in enumerate(raw):
        ppath = f"{path}[{i}]"
        if not isinstance(raw_party, dict):
            errs.add(ppath, BAD_TYPE, "party spec must be an object")
            continue
        for key in raw_party:
            if key not in _PARTY_FIELDS:
                errs.add(f"{ppath}.{key}", UNKNOWN_FIELD, f"unknown party field {key!r}")
        name = _require_str(raw_party, "name", ppath, errs)
        if name is None:
            continue
        if name in names:
            errs.add(f"{ppath}.name", BAD_ENUM_VALUE, f"duplicate party name {name!r}")
            continue
        names.add(name)
        specs.append(
            PartySpec(
                name=name,
                subroutines=_id_list(raw_party, "subroutines", ppath, errs),
                resources=_id_list(raw_party, "resources", ppath, errs),
                uses_protocols=_id_list(raw_party, "uses_protocols", ppath, errs),
            )
        )
    return tuple(specs)


def slugify(text: str) -> str:
    slug = re.sub(r"[^a-z0-9]+", "-", text.lower()).strip("-")
    return slug


def lower_to_graph(doc: CorpusDocument) -> tuple[list[Node], list[Edge]]:
    """Deterministically lower a parsed document to graph-core input.

    Every referenced id must be declared; unresolved references raise
    ``CorpusError`` listing all of them.
    """
    errs = _Collector()
    declared = {record.id for record in doc.nodes}

    def check(ids: tuple[str, ...], path: str) -> None:
        for i, ref in enumerate(ids):
            if ref not in declared:
                errs.add(f"{path}[{i}]", UNRESOLVED_REFERENCE, f"reference to undeclared id {ref!r}")

    nodes: list[Node] = []
    edges: list[Edge] = []
    for idx, record in enumerate(doc.nodes):
        path = f"nodes[{idx}]"
        nodes.append(
            Node(
                id=record.id,
                label=record.label,
                kind=record.kind,
                stage=record.stage,
                tags=record.tags,
                page=record.page,
            )
        )
        check(record.implements, f"{path}.implements")
        check(record.uses_protocols, f"{path}.uses_protocols")
        check(record.subroutines, f"{path}.subroutines")
        check(record.resources, f"{path}.resources")
        if isinstance(record.page, FunctionalityPage):
            check(record.page.protocols, f"{path}.page.protocols")

        for ref in record.implements:
            edges.append(Edge(ref, record.id, EdgeKind.IMPLEMENTED_BY))
        for ref in record.uses_protocols:
            edges.append(Edge(record.id, ref, EdgeKind.REQUIRES_FUNCTIONALITY))
        for ref in record.subroutines:
            edges.append(Edge(record.id, ref, EdgeKind.USES_SUBROUTINE))
        for ref in record.resources:
            edges.append(Edge(record.id, ref, EdgeKind.USES_RESOURCE))
        for party in record.parties:
            party_id = f"{record.id}--{slugify(party.name)}"
            ppath = f"{path}.parties"
            nodes.append(Node(id=party_id, label=party.name, kind=NodeKind.PARTY))
            edges.append(Edge(record.id, party_id, EdgeKind.HAS_PARTY))
            check(party.subroutines, f"{ppath}.subroutines")
            check(party.resources, f"{ppath}.resources")
            check(party.uses_protocols, f"{ppath}.uses_protocols")
            for ref in party.subroutines:
                edges.append(Edge(party_id, ref, EdgeKind.USES_SUBROUTINE))
            for ref in party.resources:
                edges.append(Edge(party_id, ref, EdgeKind.USES_RESOURCE))
            for ref in party.uses_protocols:
                edges.append(Edge(party_id, ref, EdgeKind.PARTY_USES_PROTOCOL))

    if errs.errors:
        raise CorpusError(errs.errors)
    return nodes, edges


def serialize_corpus(doc: CorpusDocument) -> str:
    """Canonical UTF-8 form: fixed key order, records sorted by id."""
    payload = {
        "version": doc.version,
        "nodes": [_record_payload(record) for record in doc.nodes],
    }
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def _record_payload(record: NodeRecord) -> dict:
    out: dict = {"id": record.id, "kind": record.kind.value, "label": record.label}
    if record.stage is not None:
        out["stage"] = record.stage.label
    if record.tags is not None:
        tags = {}
        for key in ("use_case", "parties", "applicability", "methodology_stage"):
            value = getattr(record.tags, key)
            if value is not None:
                tags[key] = value
        out["tags"] = tags
    if record.page is not None:
        out["page"] = _page_payload(record.page)
    for key in ("implements", "uses_protocols", "subroutines", "resources"):
        values = getattr(record, key)
        if values:
            out[key] = list(values)
    if record.parties:
        out["parties"] = [
            {
                "name": party.name,
                **({"subroutines": list(party.subroutines)} if party.subroutines else {}),
                **({"resources": list(party.resources)} if party.resources else {}),
                **({"uses_protocols": list(party.uses_protocols)} if party.uses_protocols else {}),
            }
            for party in record.parties
        ]
    if record.provenance is not None:
        out["provenance"] = record.provenance
    return out


def _page_payload(page: FunctionalityPage | ProtocolPage) -> dict:
    out: dict = {}
    if isinstance(page, FunctionalityPage):
        out["description"] = page.description
        if page.use_case:
            out["use_case"] = page.use_case
        if page.protocols:
            out["protocols"] = list(page.protocols)
        if page.properties:
            out["properties"] = list(page.properties)
        if page.further_information:
            out["further_information"] = page.further_information
        return out
    out["abstract"] = page.abstract
    if page.assumptions:
        out["assumptions"] = list(page.assumptions)
    if page.requirements:
        out["requirements"] = page.requirements
    if page.properties:
        out["properties"] = list(page.properties)
    if page.description:
        out["description"] = list(page.description)
    if page.further_information:
        out["further_information"] = page.further_information
    return out


def load_corpus_text(text: bytes | str) -> tuple[CorpusDocument, KnowledgeGraph]:
    """Parse, lower and build in one step; returns (document, graph)."""
    doc = parse_corpus(text)
    nodes, edges = lower_to_graph(doc)
    return doc, build_graph(nodes, edges)


def load_corpus(path) -> tuple[CorpusDocument, KnowledgeGraph]:
    with open(path, "rb") as handle:
        return load_corpus_text(handle.read())
