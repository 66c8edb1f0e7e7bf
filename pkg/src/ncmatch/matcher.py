"""Perfect matching, minimum-weight perfect matching and maximum matching."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import Optional, Union

from .graph import Minor
from .oracle import Oracle
from .parallel import Context
from .partial import run_partial_matching
from .reduce import reduce

Weights = Union[Mapping[int, int], Sequence[int]]


@dataclass
class MatchingResult:
    edges: list[int]
    weight: int
    stats: dict[str, int] = field(default_factory=dict)


@dataclass
class NoPerfectMatching:
    stats: dict[str, int] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return False


def _context(oracle: Union[Oracle, Context, None]) -> Context:
    if isinstance(oracle, Context):
        return oracle
    return Context(oracle)


def _weight(w: Optional[Weights], edges: Sequence[int]) -> int:
    return 0 if w is None else sum(int(w[e]) for e in edges)


def _matched_endpoint(graph: Minor, minor: Minor, node: int, part: frozenset[int]) -> int:
    (e,) = minor.incident_edges(node)
    u, v = graph.edges[e]
    return u if u in part else v


def _perfect_matching(g: Minor, ctx: Context, depth: int) -> tuple[list[int], int]:
    """Edge ids of a perfect matching of ``g`` and the parallel rounds used."""
    ctx.stats.see_depth(depth)
    if not g.nodes:
        return [], 0
    run = run_partial_matching(g, ctx)
    ctx.stats.add_iterations(run.iterations)
    h = run.minor
    parts = h.preimages()
    subs = []
    for node in h.nodes:
        part = parts[node]
        if len(part) > 1:
            x = _matched_endpoint(g, h, node, part)
            subs.append(g.induced(part - {x}))
    done = ctx.pmap(lambda sub: _perfect_matching(sub, ctx, depth + 1), subs)
    edges = list(h.edges)
    for es, _ in done:
        edges.extend(es)
    rounds = run.rounds + (1 + max(r for _, r in done) if done else 0)
    return sorted(edges), rounds


def _min_weight(g: Minor, w: Weights, ctx: Context, depth: int) -> tuple[list[int], int]:
    ctx.stats.see_depth(depth)
    if not g.nodes:
        return [], 0
    h = reduce(g.rebased(), w, ctx.oracle, ctx.pmap)
    top, rounds = _perfect_matching(h, ctx, 1)
    parts = h.preimages()
    matched = h.restrict_edges(top)
    subs = []
    for node in h.nodes:
        part = parts[node]
        if len(part) > 1:
            x = _matched_endpoint(g, matched, node, part)
            subs.append(g.induced(part - {x}))
    done = ctx.pmap(lambda sub: _min_weight(sub, w, ctx, depth + 1), subs)
    edges = list(top)
    for es, _ in done:
        edges.extend(es)
    rounds += 1 + (1 + max(r for _, r in done) if done else 0)
    return sorted(edges), rounds


def _finish(ctx: Context, edges: list[int], rounds: int, w: Optional[Weights]) -> MatchingResult:
    ctx.stats.rounds = rounds
    return MatchingResult(edges, _weight(w, edges), ctx.stats_dict())


def perfect_matching(graph: Minor, oracle: Union[Oracle, Context, None] = None,
                     w: Optional[Weights] = None) -> Union[MatchingResult, NoPerfectMatching]:
    """Some perfect matching of ``graph``; ``w`` only sets the reported weight."""
    ctx = _context(oracle)
    g = graph.rebased()
    if ctx.oracle.mwpm_weight(g, dict.fromkeys(g.edges, 0)) is None:
        return NoPerfectMatching(ctx.stats_dict())
    edges, rounds = _perfect_matching(g, ctx, 1)
    return _finish(ctx, edges, rounds, w)


def min_weight_perfect_matching(graph: Minor, w: Weights,
                                oracle: Union[Oracle, Context, None] = None
                                ) -> Union[MatchingResult, NoPerfectMatching]:
    """A perfect matching of minimum total weight under ``w``."""
    ctx = _context(oracle)
    g = graph.rebased()
    if ctx.oracle.mwpm_weight(g, w) is None:
        return NoPerfectMatching(ctx.stats_dict())
    edges, rounds = _min_weight(g, w, ctx, 1)
    return _finish(ctx, edges, rounds, w)


def doubled_graph(graph: Minor, n: Optional[int] = None) -> tuple[Minor, list[int]]:
    """Two copies of ``graph`` plus an edge from each vertex to its twin.

    Copy-one edges keep their ids, copy-two edge ``e`` becomes ``m + e`` and
    the twin edge of vertex ``v`` is ``2m + v``.  Copy edges weigh 0, twin
    edges weigh 1.  Needs vertices ``0..n-1`` and edge ids ``0..m-1``.
    """
    n = len(graph.nodes) if n is None else n
    m = len(graph.edges)
    if sorted(graph.nodes) != list(range(n)) or sorted(graph.edges) != list(range(m)):
        raise ValueError("doubling needs a base graph with contiguous ids")
    ends = [graph.edges[e] for e in range(m)]
    edges = ends + [(u + n, v + n) for u, v in ends] + [(v, v + n) for v in range(n)]
    return Minor.from_edges(2 * n, edges), [0] * (2 * m) + [1] * n


def maximum_matching(graph: Minor, oracle: Union[Oracle, Context, None] = None) -> MatchingResult:
    """Maximum-cardinality matching; ``weight`` holds the doubled-graph optimum."""
    ctx = _context(oracle)
    doubled, w = doubled_graph(graph)
    res = min_weight_perfect_matching(doubled, w, ctx)
    assert isinstance(res, MatchingResult), "the doubled graph always has a perfect matching"
    m = len(graph.edges)
    return MatchingResult([e for e in res.edges if e < m], res.weight, res.stats)


def verify_perfect_matching(graph: Minor, edges: Sequence[int]) -> tuple[bool, str]:
    """Independent check that ``edges`` covers every vertex of ``graph`` exactly once."""
    seen: dict[int, int] = {}
    for e in edges:
        if e not in graph.edges:
            return False, f"edge {e} is not in the graph"
        for v in graph.edges[e]:
            if v in seen:
                return False, f"vertex {v} is covered by edges {seen[v]} and {e}"
            seen[v] = e
    missing = [v for v in graph.nodes if v not in seen]
    if missing:
        return False, f"vertex {missing[0]} is not covered"
    return True, "ok"


def verify_matching(graph: Minor, edges: Sequence[int]) -> tuple[bool, str]:
    seen: set[int] = set()
    for e in edges:
        if e not in graph.edges:
            return False, f"edge {e} is not in the graph"
        for v in graph.edges[e]:
            if v in seen:
                return False, f"vertex {v} is covered twice"
            seen.add(v)
    return True, "ok"
