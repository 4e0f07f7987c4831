"""Command-line front end.

Exit codes are stable: 0 success, 1 validation/schema/query failure, 2 usage
error, 3 I/O error. JSON outputs are canonical (sorted keys, sorted
set-valued arrays, trailing newline) so they are byte-stable for a fixed
corpus and arguments. Setting QPZ_NO_COLOR=1 disables ANSI color in human
output.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import export, payloads, queries
from .corpus import CorpusError, load_corpus, lower_to_graph, parse_corpus
from .graph import GraphValidationError, UnknownNodeError, validate
from .model import NetworkStage, NodeKind

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_IO = 3

STAGE_LABELS = [stage.label for stage in NetworkStage]


def _color_enabled() -> bool:
    return os.environ.get("QPZ_NO_COLOR") != "1" and sys.stdout.isatty()


def _paint(text: str, code: str) -> str:
    if _color_enabled():
        return f"\x1b[{code}m{text}\x1b[0m"
    return text


def _fail(message: str, code: int) -> int:
    print(message, file=sys.stderr)
    return code


def _read_corpus(path: str):
    try:
        return load_corpus(path)
    except OSError as exc:
        raise _IOFailure(f"cannot read corpus {path!r}: {exc.strerror or exc}") from exc


class _IOFailure(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpz",
        description="Quantum protocol dependency graph: validation, queries, export, service.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a corpus file")
    p.add_argument("corpus")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("lineage", help="ascendants and descendants of a node")
    p.add_argument("corpus")
    p.add_argument("id")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("available", help="availability closure of a selection")
    p.add_argument("corpus")
    p.add_argument("--select", required=True, help="comma-separated node ids")
    p.add_argument("--mode", choices=list(queries.MODES), default=queries.PAPER)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("stage", help="inferred network stage of a node")
    p.add_argument("corpus")
    p.add_argument("id")

    p = sub.add_parser("centrality", help="rank nodes by direct dependents")
    p.add_argument("corpus")
    p.add_argument("--kind", help="comma-separated node kinds")
    p.add_argument("--top", type=int)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("stages", help="protocols implementable up to a stage")
    p.add_argument("corpus")
    p.add_argument("--max", dest="max_stage", choices=STAGE_LABELS, default=STAGE_LABELS[-1])

    p = sub.add_parser("parties", help="per-party requirement profiles")
    p.add_argument("corpus")
    p.add_argument("id")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("export", help="write a visualization document")
    p.add_argument("corpus")
    p.add_argument("--format", choices=["viz", "dot"], default="viz")
    p.add_argument("-o", "--output")

    p = sub.add_parser("serve", help="serve the read-only HTTP API")
    p.add_argument("corpus")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--static", dest="static_dir")

    return parser


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK

    try:
        return _dispatch(args)
    except _IOFailure as exc:
        return _fail(str(exc), EXIT_IO)
    except (CorpusError, GraphValidationError) as exc:
        return _fail(f"invalid corpus: {exc}", EXIT_FAILURE)
    except UnknownNodeError as exc:
        return _fail(str(exc), EXIT_FAILURE)
    except (queries.UnknownModeError, queries.NotAProtocolError, ValueError) as exc:
        return _fail(str(exc), EXIT_FAILURE)


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "validate":
        return _cmd_validate(args)
    _, graph = _read_corpus(args.corpus)

    if args.command == "lineage":
        result = queries.lineage(graph, args.id)
        payload = payloads.lineage_payload(result)
        if args.json:
            _emit(payload)
        else:
            print(f"lineage of {args.id}")
            print(f"  ascendants ({len(payload['ascendants'])}):")
            for node_id in payload["ascendants"]:
                print(f"    {node_id}")
            print(f"  descendants ({len(payload['descendants'])}):")
            for node_id in payload["descendants"]:
                print(f"    {node_id}")
        return EXIT_OK

    if args.command == "available":
        selected = [s for s in args.select.split(",") if s]
        result = queries.available(graph, selected, args.mode)
        if args.json:
            _emit(payloads.availability_payload(result, with_mode=True))
        else:
            print(f"available nodes ({args.mode} mode): {len(result.available)}")
            for tag in (queries.SELECTED, queries.DOWNWARD, queries.UPWARD):
                members = sorted(i for i, t in result.provenance.items() if t == tag)
                if members:
                    print(f"  {tag}:")
                    for node_id in members:
                        print(f"    {node_id}")
        return EXIT_OK

    if args.command == "stage":
        stage = queries.infer_stage(graph, args.id)
        print(f"{stage.label} ({int(stage)})")
        return EXIT_OK

    if args.command == "centrality":
        kinds = None
        if args.kind:
            try:
                kinds = [NodeKind(k) for k in args.kind.split(",") if k]
            except ValueError:
                return _fail(f"unknown node kind in --kind: {args.kind!r}", EXIT_USAGE)
        ranked = queries.centrality(graph, kinds, args.top)
        if args.json:
            _emit(payloads.centrality_payload(ranked))
        else:
            for node_id, degree in ranked:
                print(f"{degree:4d}  {node_id}")
        return EXIT_OK

    if args.command == "stages":
        max_stage = NetworkStage.from_label(args.max_stage)
        members = sorted(queries.filter_by_stage(graph, max_stage))
        print(f"protocols implementable at stage <= {max_stage.label} ({len(members)}):")
        for node_id in members:
            print(f"  {node_id}")
        return EXIT_OK

    if args.command == "parties":
        profiles = queries.party_profiles(graph, args.id)
        if args.json:
            _emit(payloads.parties_payload(profiles))
        else:
            if not profiles:
                print(f"{args.id}: no party nodes (requirements attach directly)")
            for profile in profiles:
                print(f"{profile.name} [{profile.stage.label}]")
                for ref in profile.subroutines:
                    print(f"  subroutine {ref}")
                for ref in profile.resources:
                    print(f"  resource {ref}")
        return EXIT_OK

    if args.command == "export":
        if args.format == "viz":
            text = payloads.canonical_json(export.export_viz(graph))
        else:
            text = export.export_dot(graph)
        if args.output:
            try:
                with open(args.output, "w", encoding="utf-8") as handle:
                    handle.write(text)
            except OSError as exc:
                raise _IOFailure(f"cannot write {args.output!r}: {exc.strerror or exc}") from exc
        else:
            sys.stdout.write(text)
        return EXIT_OK

    if args.command == "serve":
        from .serve import run_server

        run_server(graph, args.port, args.static_dir)
        return EXIT_OK

    raise AssertionError(f"unhandled command {args.command!r}")


def _cmd_validate(args: argparse.Namespace) -> int:
    errors: list[dict] = []
    try:
        with open(args.corpus, "rb") as handle:
            data = handle.read()
    except OSError as exc:
        return _fail(f"cannot read corpus {args.corpus!r}: {exc.strerror or exc}", EXIT_IO)

    graph_ok = False
    try:
        doc = parse_corpus(data)
        nodes, edges = lower_to_graph(doc)
    except CorpusError as exc:
        errors = [e.to_dict() for e in exc.errors]
    else:
        report = validate(nodes, edges)
        errors = [v.to_dict() for v in report.violations]
        graph_ok = report.ok

    ok = graph_ok and not errors
    if args.json:
        _emit({"ok": ok, "violations": errors})
    else:
        for err in errors:
            where = err.get("path") or err.get("subject") or ""
            print(_paint(f"violation [{err['code']}] {where}: {err['message']}", "31"))
        summary = f"{len(errors)} violations"
        print(_paint(summary, "32") if ok else _paint(summary, "31"))
    return EXIT_OK if ok else EXIT_FAILURE


def _emit(payload) -> None:
    sys.stdout.write(payloads.canonical_json(payload))


def main() -> None:
    raise SystemExit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
