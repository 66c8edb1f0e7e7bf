"""Even walks, their signatures, circulation and mismatch, and the weight family."""

from __future__ import annotations

import math
from collections.abc import Collection, Mapping, Sequence
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .errors import InvalidWalk, WeightCapError
from .fieldmath import primes_above
from .graph import Minor

EVEN_CYCLE = "even_cycle"
ODD_PAIR = "odd_pair"


def _trace(ends: Sequence[tuple[int, int]], start: int) -> Optional[list[int]]:
    verts = [start]
    for u, v in ends:
        cur = verts[-1]
        if cur == u:
            verts.append(v)
        elif cur == v:
            verts.append(u)
        else:
            return None
    return verts if verts[-1] == start else None


def _simple_odd_cycle(verts: Sequence[int]) -> bool:
    inner = verts[:-1]
    return (len(verts) >= 2 and verts[0] == verts[-1]
            and len(set(inner)) == len(inner) and len(inner) % 2 == 1)


def _split_odd_pair(cyc: list[int]) -> bool:
    """Can the closed vertex sequence be cut at one vertex into two simple odd cycles?"""
    L = len(cyc)
    for r in range(L):
        rot = cyc[r:] + cyc[:r]
        for j in range(1, L, 2):
            if rot[j] == rot[0] and _simple_odd_cycle(rot[:j + 1]) \
                    and _simple_odd_cycle(rot[j:] + [rot[0]]):
                return True
    return False


def _classify(edges: Sequence[int], verts: list[int]) -> str:
    L = len(edges)
    count: dict[int, list[int]] = {}
    for i, e in enumerate(edges):
        count.setdefault(e, []).append(i)
    if any(len(p) > 2 for p in count.values()):
        raise InvalidWalk("an edge is traversed more than twice")
    for e, pos in count.items():
        if len(pos) == 2 and (pos[1] - pos[0]) % 2:
            raise InvalidWalk(f"edge {e} is traversed twice with different parities")
    cyc = verts[:-1]
    if all(len(p) == 1 for p in count.values()):
        if len(set(cyc)) == len(cyc):
            return EVEN_CYCLE
        if _split_odd_pair(cyc):
            return ODD_PAIR
        raise InvalidWalk("walk is neither a simple even cycle nor two odd cycles")
    # rotate so position 0 opens a run of single edges right after a doubled edge
    single = [len(count[e]) == 1 for e in edges]
    if not any(single):
        raise InvalidWalk("walk has no cycle part")
    r = next(i for i in range(L) if single[i] and not single[i - 1])
    es = list(edges[r:]) + list(edges[:r])
    vs = cyc[r:] + cyc[:r]
    vs.append(vs[0])
    sg = single[r:] + single[:r]
    runs: list[tuple[bool, int, int]] = []
    i = 0
    while i < L:
        j = i
        while j < L and sg[j] == sg[i]:
            j += 1
        runs.append((sg[i], i, j))
        i = j
    if [k for k, _, _ in runs] != [True, False, True, False]:
        raise InvalidWalk("walk is not two odd cycles joined by a path")
    (_, a0, a1), (_, p0, p1), (_, b0, b1), (_, q0, q1) = runs
    c1, c2 = vs[a0:a1 + 1], vs[b0:b1 + 1]
    path = vs[p0:p1 + 1]
    if es[q0:q1] != es[p0:p1][::-1]:
        raise InvalidWalk("connecting path is not retraced in reverse")
    if not (_simple_odd_cycle(c1) and _simple_odd_cycle(c2)):
        raise InvalidWalk("cycle part is not a simple odd cycle")
    if len(set(path)) != len(path):
        raise InvalidWalk("connecting path is not simple")
    if set(path[1:-1]) & (set(c1) | set(c2)):
        raise InvalidWalk("connecting path runs through a cycle")
    return ODD_PAIR


@dataclass(frozen=True)
class EvenWalk:
    """A closed walk of even length: a simple even cycle, or two odd cycles
    joined by a path that is traversed once in each direction."""

    edges: tuple[int, ...]
    ends: tuple[tuple[int, int], ...]
    vertices: tuple[int, ...]
    kind: str

    @classmethod
    def build(cls, graph: Minor, edges: Sequence[int], start: Optional[int] = None) -> EvenWalk:
        edges = tuple(edges)
        if not edges or len(edges) % 2:
            raise InvalidWalk("a walk needs a positive even number of edges")
        missing = [e for e in edges if e not in graph.edges]
        if missing:
            raise InvalidWalk(f"edge {missing[0]} is not in the graph")
        ends = tuple(graph.edges[e] for e in edges)
        starts = [start] if start is not None else list(dict.fromkeys(ends[0]))
        err: Optional[InvalidWalk] = None
        for s in starts:
            verts = _trace(ends, s)
            if verts is None:
                continue
            try:
                kind = _classify(edges, verts)
            except InvalidWalk as exc:
                err = exc
                continue
            return cls(edges, ends, tuple(verts), kind)
        raise err or InvalidWalk("edges do not form a closed walk")

    def __len__(self) -> int:
        return len(self.edges)


def signature(walk: EvenWalk) -> dict[int, int]:
    """Sum of ``(-1)**i`` times the indicator of the ``i``-th edge, ``i`` from 1."""
    sig: dict[int, int] = {}
    for i, e in enumerate(walk.edges, 1):
        sig[e] = sig.get(e, 0) + (1 if i % 2 == 0 else -1)
    sig = {e: c for e, c in sig.items() if c}
    if not sig:
        raise InvalidWalk("signature vanishes")
    return sig


def signature_vector(walk: EvenWalk, m: int) -> list[int]:
    out = [0] * m
    for e, c in signature(walk).items():
        out[e] = c
    return out


def circulation(w: Mapping[int, int] | Sequence[int], walk: EvenWalk) -> int:
    return abs(sum(w[e] * c for e, c in signature(walk).items()))


def mismatch(walk: EvenWalk, S: Collection[int]) -> int:
    """``|<1_cut(S), signature>|``; a doubled crossing edge counts twice."""
    inside = set(S)
    total = 0
    for i, (u, v) in enumerate(walk.ends, 1):
        if (u in inside) != (v in inside):
            total += 1 if i % 2 == 0 else -1
    return abs(total)


def walk_budget(m: int, n: int, scale: float = 1.0) -> int:
    """``ceil(scale * m / log2(n)**2)``, at least 1."""
    if n < 3:
        return 1
    return max(1, math.ceil(scale * m / math.log2(n) ** 2))


def family_size(m: int, s: int) -> int:
    return 2 * m * s


@lru_cache(maxsize=256)
def family_primes(m: int, s: int, count: Optional[int] = None) -> tuple[int, ...]:
    if m < 1 or s < 1:
        raise ValueError("m and s must be positive")
    k = family_size(m, s) if count is None else count
    return tuple(primes_above(max(m * m, s), k))


def family_member(m: int, p: int) -> tuple[int, ...]:
    """Powers of five over the edge index, reduced mod ``p``."""
    out = []
    x = 1 % p
    for _ in range(m):
        out.append(x)
        x = x * 5 % p
    return tuple(out)


def weight_family(m: int, s: int, count: Optional[int] = None,
                  cap: Optional[int] = None) -> list[tuple[int, ...]]:
    primes = family_primes(m, s, count)
    if cap is not None and primes and primes[-1] - 1 > cap:
        raise WeightCapError(f"family weights reach {primes[-1] - 1}, cap is {cap}")
    return [family_member(m, p) for p in primes]
