#!/usr/bin/env python3
"""Count incoming dependency references straight from a corpus JSON file.

Deliberately avoids the qpz package: degrees are derived from the raw record
lists so the output can vet the engine's centrality ranking independently.

Usage: python scripts/count_degrees.py data/seed.json [--kind resource,subroutine] [--top N]
"""

from __future__ import annotations

import argparse
import json
import re
from collections import Counter


def slugify(text: str) -> str:
    return re.sub(r"[^a-z0-9]+", "-", text.lower()).strip("-")


def raw_degrees(corpus: dict) -> tuple[Counter, dict[str, str]]:
    """In-degree per node id, plus an id -> kind map (parties included)."""
    degrees: Counter = Counter()
    kinds: dict[str, str] = {}
    for record in corpus["nodes"]:
        kinds[record["id"]] = record["kind"]
        for party in record.get("parties", ()):
            kinds[f"{record['id']}--{slugify(party['name'])}"] = "party"

    for record in corpus["nodes"]:
        rid = record["id"]
        # "implements" declares an edge from the functionality to this record.
        for _ in record.get("implements", ()):
            degrees[rid] += 1
        for ref in record.get("uses_protocols", ()):
            degrees[ref] += 1
        for ref in record.get("subroutines", ()):
            degrees[ref] += 1
        for ref in record.get("resources", ()):
            degrees[ref] += 1
        for party in record.get("parties", ()):
            degrees[f"{rid}--{slugify(party['name'])}"] += 1
            for ref in party.get("uses_protocols", ()):
                degrees[ref] += 1
            for ref in party.get("subroutines", ()):
                degrees[ref] += 1
            for ref in party.get("resources", ()):
                degrees[ref] += 1
    return degrees, kinds


def ranked_degrees(corpus: dict, kinds_filter: set[str] | None = None) -> list[tuple[str, int]]:
    degrees, kinds = raw_degrees(corpus)
    rows = [
        (node_id, degrees.get(node_id, 0))
        for node_id in kinds
        if kinds_filter is None or kinds[node_id] in kinds_filter
    ]
    rows.sort(key=lambda pair: (-pair[1], pair[0]))
    return rows


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("corpus")
    parser.add_argument("--kind", help="comma-separated node kinds to keep")
    parser.add_argument("--top", type=int)
    args = parser.parse_args()

    with open(args.corpus, "r", encoding="utf-8") as handle:
        corpus = json.load(handle)
    kinds_filter = set(args.kind.split(",")) if args.kind else None
    rows = ranked_degrees(corpus, kinds_filter)
    if args.top:
        rows = rows[: args.top]
    for node_id, degree in rows:
        print(f"{degree:4d}  {node_id}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
