from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qpz import (
    CorpusError,
    EdgeKind,
    NodeKind,
    build_graph,
    lower_to_graph,
    parse_corpus,
    serialize_corpus,
)
from qpz.corpus import (
    BAD_ENUM_VALUE,
    BAD_ID,
    BAD_VERSION,
    MALFORMED_SYNTAX,
    MISSING_REQUIRED_FIELD,
    UNKNOWN_FIELD,
    UNRESOLVED_REFERENCE,
    slugify,
)


def doc_bytes(nodes, version=1) -> bytes:
    return json.dumps({"version": version, "nodes": nodes}).encode()

def errors_of(exc_info) -> set[tuple[str, str]]:
    return {(e.path, e.code) for e in exc_info.value.errors}


MINI = [
    {"id": "sig", "kind": "functionality", "label": "Sig"},
    {
        "id": "signer",
        "kind": "protocol",
        "label": "Signer",
        "implements": ["sig"],
        "subroutines": ["hash"],
        "resources": ["memory"],
    },
    {"id": "hash", "kind": "subroutine", "label": "Hash", "stage": "classical"},
    {"id": "memory", "kind": "resource", "label": "Memory", "stage": "quantum-memory"},
]


class TestParsing:
    def test_minimal_document(self):
        doc = parse_corpus(doc_bytes(MINI))
        assert [r.id for r in doc.nodes] == ["hash", "memory", "sig", "signer"]

    def test_malformed_syntax(self):
        with pytest.raises(CorpusError) as exc:
            parse_corpus(b"{nope")
        assert {code for _, code in errors_of(exc)} == {MALFORMED_SYNTAX}

    def test_bad_version(self):
        with pytest.raises(CorpusError) as exc:
            parse_corpus(doc_bytes([], version=2))
        assert ("version", BAD_VERSION) in errors_of(exc)

    def test_unknown_field_rejected(self):
        record = {"id": "a", "kind": "resource", "label": "A", "stage": "classical", "colour": "red"}
        with pytest.raises(CorpusError) as exc:
            parse_corpus(doc_bytes([record]))
        assert ("nodes[0].colour", UNKNOWN_FIELD) in errors_of(exc)

    def test_kind_specific_field_rejected(self):
        record = {"id": "a", "kind": "resource", "label": "A", "stage": "classical", "parties": []}
        with pytest.raises(CorpusError) as exc:
            parse_corpus(doc_bytes([record]))
        assert ("nodes[0].parties", UNKNOWN_FIELD) in errors_of(exc)

    def test_missing_page_abstract_path(self):
        record = {"id": "p", "kind": "protocol", "label": "P", "page": {"requirements": "none"}}
        with pytest.raises(CorpusError) as exc:
            parse_corpus(doc_bytes([record]))
        assert ("nodes[0].page.abstract", MISSING_REQUIRED_FIELD) in errors_of(exc)

    def test_missing_stage_on_resource(self):
        record = {"id": "a", "kind": "resource", "label": "A"}
        with pytest.raises(CorpusError) as exc:
            parse_corpus(doc_bytes([record]))
        assert ("nodes[0].stage", MISSING_REQUIRED_FIELD) in errors_of(exc)

    def test_bad_enum_and_bad_id(self):
        records = [
            {"id": "A_Bad", "kind": "resource", "label": "x", "stage": "classical"},
            {"id": "ok", "kind": "gizmo", "label": "x"},
            {"id": "ok2", "kind": "resource", "label": "x", "stage": "warp"},
        ]
        with pytest.raises(CorpusError) as exc:
            parse_corpus(doc_bytes(records))
        found = errors_of(exc)
        assert ("nodes[0].id", BAD_ID) in found
        assert ("nodes[1].kind", BAD_ENUM_VALUE) in found
        assert ("nodes[2].stage", BAD_ENUM_VALUE) in found

    def test_party_kind_cannot_be_declared(self):
        record = {"id": "ghost", "kind": "party", "label": "Ghost"}
        with pytest.raises(CorpusError) as exc:
            parse_corpus(doc_bytes([record]))
        assert ("nodes[0].kind", BAD_ENUM_VALUE) in errors_of(exc)

    def test_duplicate_id_surfaces_at_graph_build(self):
        records = [
            {"id": "bb84", "kind": "protocol", "label": "one"},
            {"id": "bb84", "kind": "protocol", "label": "two"},
        ]
        doc = parse_corpus(doc_bytes(records))
        nodes, edges = lower_to_graph(doc)
        from qpz import validate

        assert validate(nodes, edges).codes() == {"duplicate-id"}

    def test_errors_collected_not_first_only(self):
        records = [
            {"id": "a", "kind": "resource", "label": "A"},
            {"id": "b", "kind": "mystery", "label": "B"},
        ]
        with pytest.raises(CorpusError) as exc:
            parse_corpus(doc_bytes(records))
        assert len(errors_of(exc)) == 2


class TestLowering:
    def test_reference_lists_become_edges(self):
        doc = parse_corpus(doc_bytes(MINI))
        nodes, edges = lower_to_graph(doc)
        triples = {e.triple() for e in edges}
        assert triples == {
            ("sig", "signer", "implemented-by"),
            ("signer", "hash", "uses-subroutine"),
            ("signer", "memory", "uses-resource"),
        }
        assert len(nodes) == 4

    def test_isolated_record_has_no_edges(self):
        doc = parse_corpus(doc_bytes([{"id": "lonely", "kind": "protocol", "label": "L"}]))
        nodes, edges = lower_to_graph(doc)
        assert len(nodes) == 1 and edges == []

    def test_party_synthesis(self):
        records = [
            {
                "id": "delegate",
                "kind": "protocol",
                "label": "Delegate",
                "parties": [
                    {"name": "Client", "resources": ["meter"]},
                    {"name": "Server", "subroutines": ["weave"]},
                ],
            },
            {"id": "meter", "kind": "resource", "label": "Meter", "stage": "prepare-and-measure"},
            {"id": "weave", "kind": "subroutine", "label": "Weave", "stage": "quantum-computing"},
        ]
        doc = parse_corpus(doc_bytes(records))
        nodes, edges = lower_to_graph(doc)
        by_id = {node.id: node for node in nodes}
        assert by_id["delegate--client"].kind is NodeKind.PARTY
        assert by_id["delegate--server"].label == "Server"
        client_edges = [e for e in edges if e.source == "delegate--client"]
        assert [e.triple() for e in client_edges] == [
            ("delegate--client", "meter", "uses-resource")
        ]

    def test_unresolved_reference(self):
        records = [{"id": "p", "kind": "protocol", "label": "P", "resources": ["missing"]}]
        doc = parse_corpus(doc_bytes(records))
        with pytest.raises(CorpusError) as exc:
            lower_to_graph(doc)
        assert ("nodes[0].resources[0]", UNRESOLVED_REFERENCE) in errors_of(exc)

    def test_page_protocol_references_checked(self):
        records = [
            {
                "id": "f",
                "kind": "functionality",
                "label": "F",
                "page": {"description": "task", "protocols": ["nope"]},
            }
        ]
        doc = parse_corpus(doc_bytes(records))
        with pytest.raises(CorpusError) as exc:
            lower_to_graph(doc)
        assert ("nodes[0].page.protocols[0]", UNRESOLVED_REFERENCE) in errors_of(exc)

    def test_seed_mo_ubqc_parties(self, seed_doc):
        nodes, edges = lower_to_graph(seed_doc)
        proto = "measurement-only-universal-blind-quantum-computation"
        client = f"{proto}--client"
        party_ids = {n.id for n in nodes if n.kind is NodeKind.PARTY and n.id.startswith(proto)}
        assert party_ids == {client, f"{proto}--server"}
        client_uses = [e for e in edges if e.source == client and e.kind is EdgeKind.USES_RESOURCE]
        assert len(client_uses) == 1

    def test_seed_quantum_cheque_touches_functionalities(self, seed_doc):
        nodes, edges = lower_to_graph(seed_doc)
        functionality_ids = {n.id for n in nodes if n.kind is NodeKind.FUNCTIONALITY}
        touching = [
            e
            for e in edges
            if "quantum-cheque" in (e.source, e.target)
            and (e.source in functionality_ids or e.target in functionality_ids)
        ]
        assert len(touching) >= 4

    def test_lowering_deterministic(self, seed_doc):
        first = lower_to_graph(seed_doc)
        second = lower_to_graph(seed_doc)
        assert first == second


class TestSerialization:
    def test_round_trip_identity(self, seed_doc):
        assert parse_corpus(serialize_corpus(seed_doc)) == seed_doc

    def test_seed_file_is_canonical(self, seed_path, seed_doc):
        assert serialize_corpus(seed_doc) == seed_path.read_text(encoding="utf-8")

    def test_reordered_records_same_output(self, seed_path):
        raw = json.loads(seed_path.read_text(encoding="utf-8"))
        rng = random.Random(3)
        rng.shuffle(raw["nodes"])
        shuffled = parse_corpus(json.dumps(raw))
        assert serialize_corpus(shuffled) == serialize_corpus(parse_corpus(seed_path.read_bytes()))

    def test_serialization_deterministic(self, seed_doc):
        assert serialize_corpus(seed_doc) == serialize_corpus(seed_doc)

    def test_trailing_newline(self, seed_doc):
        assert serialize_corpus(seed_doc).endswith("}\n")


IDENT = st.from_regex(r"[a-z][a-z0-9]{0,6}", fullmatch=True)


@st.composite
def documents(draw):
    """Small random but schema-valid corpus documents."""
    ids = draw(st.lists(IDENT, min_size=1, max_size=6, unique=True))
    records = []
    for node_id in ids:
        kind = draw(st.sampled_from(["functionality", "protocol", "subroutine", "resource"]))
        record: dict = {"id": node_id, "kind": kind, "label": draw(st.text(min_size=1, max_size=12))}
        if kind in ("subroutine", "resource"):
            record["stage"] = draw(st.sampled_from(["classical", "quantum-memory"]))
        protocols = [i for i in ids if i != node_id]
        if kind == "protocol" and protocols and draw(st.booleans()):
            record["parties"] = [
                {"name": draw(st.sampled_from(["Client", "Server", "Verifier"]))}
            ]
        records.append(record)
    return {"version": 1, "nodes": records}


@settings(max_examples=80, deadline=None)
@given(documents())
def test_round_trip_property(raw):
    doc = parse_corpus(json.dumps(raw))
    assert parse_corpus(serialize_corpus(doc)) == doc


def test_slugify_examples():
    assert slugify("Client") == "client"
    assert slugify("Bank branch #2") == "bank-branch-2"
    assert slugify("  Weighted--Name  ") == "weighted-name"


def test_seed_builds_clean(seed_doc):
    nodes, edges = lower_to_graph(seed_doc)
    graph = build_graph(nodes, edges)
    assert len(graph.nodes) == len(nodes)
