"""``nc-match`` command line front end."""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import logging
import math
import os
import sys
from typing import Any, Optional, Sequence

from .duals import balanced_critical_dual
from .errors import NCMatchError, WeightCapError
from .graph import Minor
from .io import read_dimacs
from .lab import cycle_bound, extract_edge_disjoint_cycles, many_even_walks
from .matcher import (MatchingResult, maximum_matching, min_weight_perfect_matching,
                      perfect_matching, verify_matching, verify_perfect_matching)
from .oracle import DEFAULT_PRIME, OracleTranscript, ReplayOracle, make_oracle
from .parallel import Config, Context
from .partial import find_triads, maximal_disjoint_triads

log = logging.getLogger("ncmatch")

EXIT_OK, EXIT_ERROR, EXIT_NO_PM, EXIT_VERIFY = 0, 1, 2, 3


def _default_seed() -> int:
    raw = os.environ.get("NC_MATCH_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"NC_MATCH_SEED must be an integer, got {raw!r}")


def build_parser() -> argparse.ArgumentParser:
    seed = _default_seed()
    p = argparse.ArgumentParser(prog="nc-match",
                                description="Perfect matchings through a decision oracle.")
    p.add_argument("mode", choices=["pm", "mwpm", "maxmatching", "decide", "lab"])
    p.add_argument("graphs", nargs="+", metavar="graph", help="DIMACS-like input file(s)")
    p.add_argument("--oracle", choices=["brute", "tutte", "replay"], default="brute")
    p.add_argument("--field-prime", type=int, default=DEFAULT_PRIME)
    p.add_argument("--oracle-seed", type=int, default=seed)
    p.add_argument("--oracle-retrials", type=int, default=3)
    p.add_argument("--transcript-in", metavar="PATH",
                   help="preload oracle answers (required for --oracle replay)")
    p.add_argument("--transcript-out", metavar="PATH", help="write the oracle transcript")
    p.add_argument("--dump-duals", metavar="PATH", help="write the top-level dual family")
    p.add_argument("--walk-budget-scale", type=float, default=1.0)
    p.add_argument("--mis-seed", type=int, default=seed)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--weight-cap", type=int, default=10**6,
                   help="reject input weights above this magnitude")
    p.add_argument("-W", "--bound", type=int, help="threshold for decide mode")
    p.add_argument("--out", metavar="PATH", help="write the result here instead of stdout")
    p.add_argument("--verify", action="store_true", help="check the output independently")
    p.add_argument("--trace", metavar="PATH", help="write the iteration trace as JSON lines")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _context(args: argparse.Namespace) -> Context:
    transcript = OracleTranscript.load(args.transcript_in) if args.transcript_in else None
    if args.oracle == "replay":
        if transcript is None:
            raise NCMatchError("--oracle replay needs --transcript-in")
        oracle = ReplayOracle(transcript)
    else:
        oracle = make_oracle(args.oracle, prime=args.field_prime, seed=args.oracle_seed,
                             retrials=args.oracle_retrials)
        if transcript is not None:
            oracle.transcript = transcript
    config = Config(threads=args.threads, mis_seed=args.mis_seed,
                    walk_budget_scale=args.walk_budget_scale)
    return Context(oracle, config)


def _pairs(graph: Minor, edges: Sequence[int]) -> list[list[int]]:
    return [[graph.edges[e][0] + 1, graph.edges[e][1] + 1] for e in edges]


def _run_matching(args, graph: Minor, w: list[int], ctx: Context) -> tuple[dict[str, Any], int]:
    mode = args.mode
    if mode == "pm":
        res = perfect_matching(graph, ctx, w)
    elif mode == "mwpm":
        res = min_weight_perfect_matching(graph, w, ctx)
    else:
        res = maximum_matching(graph, ctx)
    out: dict[str, Any] = {"mode": mode}
    code = EXIT_OK
    if isinstance(res, MatchingResult):
        out["matching"] = _pairs(graph, res.edges)
        out["weight"] = sum(w[e] for e in res.edges)
        out["no_perfect_matching"] = False
        if mode == "maxmatching":
            out["size"] = len(res.edges)
            out["doubled_weight"] = res.weight
        if args.verify:
            check = verify_matching if mode == "maxmatching" else verify_perfect_matching
            ok, msg = check(graph, res.edges)
            out["verify"] = {"ok": ok, "message": msg}
            if not ok:
                code = EXIT_VERIFY
    else:
        out.update(matching=[], weight=None, no_perfect_matching=True)
        code = EXIT_NO_PM
    out["stats"] = ctx.stats_dict()
    return out, code


def _run_decide(args, graph: Minor, w: list[int], ctx: Context) -> tuple[dict[str, Any], int]:
    if args.bound is None:
        raise NCMatchError("decide mode needs -W")
    opt = ctx.oracle.mwpm_weight(graph, w)
    yes = opt is not None and opt <= args.bound
    return {"mode": "decide", "bound": args.bound, "decision": "yes" if yes else "no",
            "weight": opt, "no_perfect_matching": opt is None,
            "stats": ctx.stats_dict()}, EXIT_OK


LAB_FIELDS = ["graph", "n", "m", "triads", "triad_bound", "disjoint_triads",
              "cycles", "cycle_bound", "even_walks", "walk_scale"]


def lab_row(name: str, graph: Minor, seed: int = 0) -> dict[str, Any]:
    n, m = len(graph.nodes), len(graph.edges)
    triads = find_triads(graph)
    chosen, _ = maximal_disjoint_triads(triads, seed)
    return {
        "graph": name, "n": n, "m": m,
        "triads": len(triads), "triad_bound": 9 * n - 8 * m,
        "disjoint_triads": len(chosen),
        "cycles": len(extract_edge_disjoint_cycles(graph)),
        "cycle_bound": round(cycle_bound(n, m), 4),
        "even_walks": len(many_even_walks(graph, seed)),
        "walk_scale": round(m / math.log2(n) ** 2, 4) if n > 2 else 0.0,
    }


def _write(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.mode == "lab":
            buf = _io.StringIO()
            writer = csv.DictWriter(buf, fieldnames=LAB_FIELDS, lineterminator="\n")
            writer.writeheader()
            for path in args.graphs:
                graph, _ = read_dimacs(path)
                writer.writerow(lab_row(path, graph, args.mis_seed))
            _write(args, buf.getvalue())
            return EXIT_OK
        if len(args.graphs) != 1:
            raise NCMatchError(f"{args.mode} mode takes exactly one graph")
        graph, w = read_dimacs(args.graphs[0])
        big = [x for x in w if abs(x) > args.weight_cap]
        if big:
            raise WeightCapError(f"weight {big[0]} exceeds the cap {args.weight_cap}")
        with _context(args) as ctx:
            if args.mode == "decide":
                out, code = _run_decide(args, graph, w, ctx)
            else:
                out, code = _run_matching(args, graph, w, ctx)
            if args.dump_duals:
                _dump_duals(args.dump_duals, graph, w, ctx)
            if args.transcript_out:
                ctx.oracle.transcript.dump(args.transcript_out)
            if args.trace:
                with open(args.trace, "w", encoding="utf-8") as fh:
                    for event in ctx.trace:
                        fh.write(json.dumps(event) + "\n")
        _write(args, json.dumps(out) + "\n")
        return code
    except (NCMatchError, OSError, ValueError) as exc:
        print(f"nc-match: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def _dump_duals(path: str, graph: Minor, w: list[int], ctx: Context) -> None:
    if ctx.oracle.mwpm_weight(graph, w) is None:
        sets: list[list[int]] = []
    else:
        fam = balanced_critical_dual(graph, w, ctx.oracle, pmap=ctx.pmap)
        sets = [sorted(v + 1 for v in s) for s in fam.sets]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({"sets": sets}, fh)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
