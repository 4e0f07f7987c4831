#!/usr/bin/env python3
"""Stage unlock curve: which protocols become implementable as hardware grows.

For each network stage, select every atomic function at or below that stage
and run the availability closure; the report shows the cumulative protocol
count per stage plus the protocols newly unlocked at each step. Closes with
the most shared atomic functions, the usual suspects for lab prioritization.

Usage: python scripts/stage_unlock_curve.py data/seed.json [--mode paper|any-impl]
"""

from __future__ import annotations

import argparse

from qpz import NetworkStage, NodeKind, available, centrality, load_corpus

ATOM_KINDS = (NodeKind.RESOURCE, NodeKind.SUBROUTINE)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("corpus")
    parser.add_argument("--mode", choices=["paper", "any-impl"], default="paper")
    args = parser.parse_args()

    _doc, graph = load_corpus(args.corpus)
    atoms = {
        node_id: node.stage
        for node_id, node in graph.nodes.items()
        if node.kind in ATOM_KINDS
    }

    print(f"protocols unlocked per stage ({args.mode} mode)")
    print(f"{'stage':>28}  {'atoms':>5}  {'protocols':>9}  newly unlocked")
    previous: set[str] = set()
    for stage in NetworkStage:
        selection = [node_id for node_id, s in atoms.items() if s <= stage]
        result = available(graph, selection, args.mode)
        protocols = {
            node_id
            for node_id in result.available
            if graph.nodes[node_id].kind is NodeKind.PROTOCOL
        }
        fresh = sorted(protocols - previous)
        preview = ", ".join(fresh[:3]) + (", ..." if len(fresh) > 3 else "")
        print(f"{stage.label:>28}  {len(selection):>5}  {len(protocols):>9}  {preview}")
        previous = protocols

    print()
    print("most shared atomic functions (direct dependents)")
    for node_id, degree in centrality(graph, list(ATOM_KINDS), top=8):
        print(f"  {degree:3d}  {node_id}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
