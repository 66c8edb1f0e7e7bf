"""DIMACS-like graph files and the JSON debug format for minors."""

from __future__ import annotations

import re
from typing import Any

from .errors import DimacsError
from .graph import Minor

_TOKEN = re.compile(r"\S+")


def _int(tok: re.Match, lineno: int, what: str) -> int:
    try:
        return int(tok.group())
    except ValueError:
        raise DimacsError(f"expected integer {what}, got {tok.group()!r}",
                          lineno, tok.start() + 1) from None


def parse_dimacs(text: str) -> tuple[Minor, list[int]]:
    """Parse ``p edge n m`` / ``e u v [w]`` text.

    Vertices are 1-based in the file and 0-based in the returned minor.
    Edge ids follow file order; missing weights default to 0.
    """
    n = m = None
    edges: list[tuple[int, int]] = []
    weights: list[int] = []
    last = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        last = lineno
        toks = list(_TOKEN.finditer(raw))
        if not toks or toks[0].group() == "c":
            continue
        kind = toks[0].group()
        if kind == "p":
            if n is not None:
                raise DimacsError("duplicate problem line", lineno, toks[0].start() + 1)
            if len(toks) != 4:
                raise DimacsError("problem line must be 'p edge <n> <m>'", lineno,
                                  toks[0].start() + 1)
            if toks[1].group() != "edge":
                raise DimacsError(f"unsupported format {toks[1].group()!r}", lineno,
                                  toks[1].start() + 1)
            n = _int(toks[2], lineno, "vertex count")
            m = _int(toks[3], lineno, "edge count")
            if n < 0 or m < 0:
                raise DimacsError("negative count", lineno, toks[2].start() + 1)
        elif kind == "e":
            if n is None:
                raise DimacsError("edge before problem line", lineno, toks[0].start() + 1)
            if len(toks) not in (3, 4):
                raise DimacsError("edge line must be 'e <u> <v> [<w>]'", lineno,
                                  toks[0].start() + 1)
            u = _int(toks[1], lineno, "endpoint")
            v = _int(toks[2], lineno, "endpoint")
            for tok, x in ((toks[1], u), (toks[2], v)):
                if not 1 <= x <= n:
                    raise DimacsError(f"vertex {x} out of range 1..{n}", lineno,
                                      tok.start() + 1)
            if u == v:
                raise DimacsError("self-loops are not allowed", lineno, toks[1].start() + 1)
            w = _int(toks[3], lineno, "weight") if len(toks) == 4 else 0
            edges.append((u - 1, v - 1))
            weights.append(w)
        else:
            raise DimacsError(f"unknown line type {kind!r}", lineno, toks[0].start() + 1)
    if n is None:
        raise DimacsError("missing problem line", max(last, 1))
    if len(edges) != m:
        raise DimacsError(f"header announces {m} edges, found {len(edges)}", max(last, 1))
    return Minor.from_edges(n, edges), weights


def read_dimacs(path: str) -> tuple[Minor, list[int]]:
    with open(path, encoding="utf-8") as fh:
        return parse_dimacs(fh.read())


def format_dimacs(graph: Minor, weights: list[int] | None = None) -> str:
    """Inverse of :func:`parse_dimacs` for base graphs on ``0..n-1``."""
    lines = [f"p edge {len(graph.nodes)} {len(graph.edges)}"]
    for e, (u, v) in graph.edges.items():
        w = 0 if weights is None else weights[e]
        lines.append(f"e {u + 1} {v + 1} {w}")
    return "\n".join(lines) + "\n"


def minor_to_json(minor: Minor) -> dict[str, Any]:
    return {
        "nodes": [{"id": v, "weight": minor.node_weight[v]} for v in minor.nodes],
        "edges": [{"id": e, "ends": [u, v], "original": e}
                  for e, (u, v) in minor.edges.items()],
        "lineage_vertex": [[b, x] for b, x in sorted(minor.lineage_vertex.items())],
    }


def minor_from_json(data: dict[str, Any]) -> Minor:
    nodes = [d["id"] for d in data["nodes"]]
    weight = {d["id"]: d["weight"] for d in data["nodes"]}
    edges = {d["original"]: tuple(d["ends"]) for d in data["edges"]}
    lin = {b: x for b, x in data["lineage_vertex"]}
    return Minor.build(nodes, weight, edges, lin)
