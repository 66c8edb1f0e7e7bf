"""Shrink a graph to a matching minor that is itself a perfect matching."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import NoPerfectMatchingInput, NoProgress
from .graph import (Minor, contract, dedupe_parallel_edges, is_perfect_matching_graph,
                    non_isolated_edge_count)
from .mis import luby_mis
from .oracle import Oracle, allowed_edges
from .parallel import Context
from .reduce import reduce
from .walks import family_member, family_primes, walk_budget


@dataclass(frozen=True, order=True)
class Triad:
    """Path ``a - b - c`` whose three nodes all have degree 2; ``b`` is the centre."""

    a: int
    b: int
    c: int

    @property
    def nodes(self) -> frozenset[int]:
        return frozenset((self.a, self.b, self.c))

    def sort_key(self) -> tuple[int, int]:
        return min(self.a, self.b, self.c), self.b


def find_triads(minor: Minor) -> list[Triad]:
    """Every triad, ordered by (smallest node, centre)."""
    deg = minor.degrees()
    adj = minor.adjacency()
    out = []
    for b in minor.nodes:
        if deg[b] != 2:
            continue
        a, c = sorted(x for x, _ in adj[b])
        if a == c or deg[a] != 2 or deg[c] != 2:
            continue
        out.append(Triad(a, b, c))
    return sorted(out, key=Triad.sort_key)


def maximal_disjoint_triads(triads: list[Triad], seed: int = 0) -> tuple[list[Triad], int]:
    """Maximal node-disjoint subset, via MIS on the conflict graph.  Also returns MIS rounds."""
    owners: dict[int, list[int]] = {}
    for i, t in enumerate(triads):
        for v in t.nodes:
            owners.setdefault(v, []).append(i)
    adjacency = [sorted({j for v in t.nodes for j in owners[v] if j != i})
                 for i, t in enumerate(triads)]
    chosen, rounds = luby_mis(adjacency, seed)
    return [triads[i] for i in chosen], rounds


def triad_candidate(g: Minor, chosen: list[Triad], allowed0) -> Minor:
    contracted = contract(g, [t.nodes for t in chosen])
    return contracted.restrict_edges(allowed0)


def heavy_node(g: Minor) -> Optional[int]:
    total = g.total_weight
    for v in g.nodes:
        if 6 * g.node_weight[v] >= total:
            return v
    return None


@dataclass
class PartialRun:
    minor: Minor
    iterations: int = 0
    rounds: int = 0
    counts: list[int] = field(default_factory=list)   # non-isolated edges before each step
    choices: list[int] = field(default_factory=list)  # winning candidate index per iteration
    heavy_fraction: Optional[float] = None            # weight share of the heavy node, if used


def run_partial_matching(minor: Minor, ctx: Context) -> PartialRun:
    oracle = ctx.oracle
    cfg = ctx.config
    g = minor.rebased()
    zero = dict.fromkeys(g.edges, 0)
    if g.edges and oracle.mwpm_weight(g, zero) is None:
        raise NoPerfectMatchingInput("graph has no perfect matching")
    if not g.nodes:
        return PartialRun(g)
    order = sorted(g.edges)
    m, n = len(order), len(g.nodes)
    s = walk_budget(m, n, cfg.walk_budget_scale)
    primes = family_primes(max(m, 1), s, cfg.family_size)
    run = PartialRun(g)
    while not is_perfect_matching_graph(g):
        run.iterations += 1
        run.rounds += 1
        current = non_isolated_edge_count(g)
        run.counts.append(current)
        allowed0 = allowed_edges(g, zero, oracle)
        v = heavy_node(g)
        if v is not None:
            run.heavy_fraction = g.node_weight[v] / g.total_weight
            h = g.restrict_edges(allowed0)
            rest = [x for x in h.nodes if x != v]
            h = dedupe_parallel_edges(contract(h, [rest], require_connected=False))
            ctx.emit("heavy", node=v, weight=g.node_weight[v], total=g.total_weight)
            run.minor = h
            run.counts.append(non_isolated_edge_count(h))
            run.choices.append(-1)
            return run
        triads = find_triads(g)
        chosen, mis_rounds = maximal_disjoint_triads(triads, cfg.mis_seed + run.iterations)
        run.rounds += mis_rounds
        best = triad_candidate(g, chosen, allowed0)
        best_count, best_idx = non_isolated_edge_count(best), 0
        idx = 1
        for start in range(0, len(primes), cfg.batch):
            if best_count == 0:
                break
            chunk = primes[start:start + cfg.batch]

            def attempt(p: int) -> Minor:
                vals = family_member(m, p)
                w = {e: vals[i] for i, e in enumerate(order) if e in g.edges}
                return reduce(g, w, oracle, ctx.pmap)

            for h in ctx.pmap(attempt, chunk):
                c = non_isolated_edge_count(h)
                if c < best_count:
                    best, best_count, best_idx = h, c, idx
                idx += 1
        ctx.emit("iteration", non_isolated=current, chosen=best_idx, result=best_count,
                 triads=len(chosen))
        if best_count >= current:
            raise NoProgress(f"no candidate improves on {current} non-isolated edges")
        run.choices.append(best_idx)
        g = best
    run.counts.append(non_isolated_edge_count(g))
    run.minor = g
    return run


def partial_matching(minor: Minor, oracle: Union[Oracle, Context]) -> Minor:
    """Matching minor of ``minor`` that is a perfect matching; lineage maps to ``minor``'s nodes."""
    ctx = oracle if isinstance(oracle, Context) else Context(oracle)
    return run_partial_matching(minor, ctx).minor
