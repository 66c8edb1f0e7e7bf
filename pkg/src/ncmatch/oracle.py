"""Decision oracle for minimum-weight perfect matching and the primitives on top.

Every oracle answers "what is the weight of a minimum-weight perfect
matching of this graph", returning ``None`` when the graph has no perfect
matching.  Queries are canonicalised into hashable keys and memoised in an
:class:`OracleTranscript`, which is also what replay and auditing work from.
"""

from __future__ import annotations

import hashlib
import json
import threading
from collections.abc import Iterable, Mapping
from typing import Optional

import numpy as np

from . import fieldmath
from .errors import NoPerfectMatchingInput, NoWitness, OracleError
from .graph import Minor

# (sorted node ids, edges as (edge id, u, v, weight) sorted by edge id)
QueryKey = tuple[tuple[int, ...], tuple[tuple[int, int, int, int], ...]]
Answer = Optional[int]

DEFAULT_PRIME = 2**31 - 1


def query_key(minor: Minor, w: Mapping[int, int]) -> QueryKey:
    return minor.nodes, tuple((e, u, v, int(w[e])) for e, (u, v) in minor.edges.items())


def key_without(key: QueryKey, drop: Iterable[int]) -> QueryKey:
    drop = set(drop)
    nodes, edges = key
    return (tuple(v for v in nodes if v not in drop),
            tuple(t for t in edges if t[1] not in drop and t[2] not in drop))


def key_components(key: QueryKey) -> list[QueryKey]:
    nodes, edges = key
    parent = {v: v for v in nodes}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for _, u, v, _ in edges:
        a, b = find(u), find(v)
        if a != b:
            parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for v in nodes:
        groups.setdefault(find(v), []).append(v)
    ekeys: dict[int, list] = {r: [] for r in groups}
    for t in edges:
        ekeys[find(t[1])].append(t)
    return [(tuple(groups[r]), tuple(ekeys[r])) for r in sorted(groups)]


def key_to_json(key: QueryKey) -> dict:
    return {"nodes": list(key[0]), "edges": [list(t) for t in key[1]]}


def key_from_json(data: dict) -> QueryKey:
    return tuple(data["nodes"]), tuple(tuple(t) for t in data["edges"])


def key_to_minor(key: QueryKey) -> tuple[Minor, dict[int, int]]:
    nodes, edges = key
    minor = Minor.build(nodes, dict.fromkeys(nodes, 1), {e: (u, v) for e, u, v, _ in edges},
                        {v: v for v in nodes})
    return minor, {e: w for e, _, _, w in edges}


class OracleTranscript:
    """Append-only memo of query key -> answer, with counters."""

    def __init__(self) -> None:
        self._answers: dict[QueryKey, Answer] = {}
        self._lock = threading.Lock()
        self.queries = 0
        self.cache_hits = 0

    def lookup(self, key: QueryKey) -> tuple[bool, Answer]:
        with self._lock:
            self.queries += 1
            if key in self._answers:
                self.cache_hits += 1
                return True, self._answers[key]
            return False, None

    def commit(self, key: QueryKey, answer: Answer) -> Answer:
        with self._lock:
            if key in self._answers:
                first = self._answers[key]
                if first != answer:
                    raise OracleError(f"conflicting answers {first} and {answer} for one query")
                return first
            self._answers[key] = answer
            return answer

    def get(self, key: QueryKey) -> tuple[bool, Answer]:
        with self._lock:
            if key in self._answers:
                return True, self._answers[key]
            return False, None

    def items(self) -> list[tuple[QueryKey, Answer]]:
        with self._lock:
            return list(self._answers.items())

    def __len__(self) -> int:
        return len(self._answers)

    def to_json(self) -> list[dict]:
        return [{**key_to_json(k), "answer": a} for k, a in self.items()]

    @classmethod
    def from_json(cls, data: list[dict]) -> OracleTranscript:
        t = cls()
        for entry in data:
            t.commit(key_from_json(entry), entry["answer"])
        return t

    def dump(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh)

    @classmethod
    def load(cls, path: str) -> OracleTranscript:
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


class Oracle:
    """Common machinery: memoisation, batching, per-component solving.

    Subclasses implement ``_solve_component`` for a connected query and may
    override ``_solve_component_without`` to answer a batch of vertex-pair
    deletions from one component more cheaply.
    """

    name = "oracle"

    def __init__(self, transcript: Optional[OracleTranscript] = None) -> None:
        self.transcript = transcript if transcript is not None else OracleTranscript()
        self._component_cache: dict[QueryKey, Answer] = {}

    # -- public interface ----------------------------------------------

    def mwpm_weight(self, minor: Minor, w: Mapping[int, int]) -> Answer:
        return self.answer(query_key(minor, w))

    def decide(self, minor: Minor, w: Mapping[int, int], bound: int) -> bool:
        """Is there a perfect matching of weight at most ``bound``?"""
        ans = self.mwpm_weight(minor, w)
        return ans is not None and ans <= bound

    def answer(self, key: QueryKey) -> Answer:
        hit, ans = self.transcript.lookup(key)
        if hit:
            return ans
        return self.transcript.commit(key, self.solve(key))

    def answers_without_pairs(self, minor: Minor, w: Mapping[int, int],
                              pairs: Iterable[tuple[int, int]]) -> dict[tuple[int, int], Answer]:
        """Answers for ``minor - u - v`` for every pair, issued as one batch."""
        key = query_key(minor, w)
        out: dict[tuple[int, int], Answer] = {}
        missing = []
        for pair in dict.fromkeys(pairs):
            hit, ans = self.transcript.lookup(key_without(key, pair))
            if hit:
                out[pair] = ans
            else:
                missing.append(pair)
        if missing:
            solved = self.solve_without(key, missing)
            for pair in missing:
                out[pair] = self.transcript.commit(key_without(key, pair), solved[pair])
        return out

    # -- solving -------------------------------------------------------

    def solve(self, key: QueryKey) -> Answer:
        total = 0
        for comp in key_components(key):
            ans = self._component(comp)
            if ans is None:
                return None
            total += ans
        return total

    def solve_without(self, key: QueryKey,
                      pairs: list[tuple[int, int]]) -> dict[tuple[int, int], Answer]:
        comps = key_components(key)
        where = {v: i for i, c in enumerate(comps) for v in c[0]}
        base = [self._component(c) for c in comps]
        out: dict[tuple[int, int], Answer] = {}
        same: dict[int, list[tuple[int, int]]] = {}
        for pair in pairs:
            u, v = pair
            if where[u] == where[v]:
                same.setdefault(where[u], []).append(pair)
            else:
                out[pair] = self._combine(comps, base, pair, None)
        for i, plist in same.items():
            inner = self._solve_component_without(comps[i], plist)
            for pair in plist:
                out[pair] = self._combine(comps, base, pair, (i, inner[pair]))
        return out

    def _combine(self, comps, base, pair, known) -> Answer:
        total = 0
        touched = set()
        if known is not None:
            i, ans = known
            if ans is None:
                return None
            total += ans
            touched.add(i)
        for i, c in enumerate(comps):
            if i in touched:
                continue
            if pair[0] in c[0] or pair[1] in c[0]:
                ans = self._component(key_without(c, pair))
            else:
                ans = base[i]
            if ans is None:
                return None
            total += ans
        return total

    def _component(self, comp: QueryKey) -> Answer:
        nodes, edges = comp
        if len(nodes) % 2:
            return None
        if not nodes:
            return 0
        cached = self._component_cache.get(comp, _MISSING)
        if cached is not _MISSING:
            return cached
        if len(nodes) == 2:
            ans = min(t[3] for t in edges) if edges else None
        else:
            ans = self._solve_component(comp)
        self._component_cache[comp] = ans
        return ans

    def _solve_component(self, comp: QueryKey) -> Answer:
        raise NotImplementedError

    def _solve_component_without(self, comp: QueryKey,
                                 pairs: list[tuple[int, int]]) -> dict[tuple[int, int], Answer]:
        return {pair: self.solve(key_without(comp, pair)) for pair in pairs}


_MISSING = object()


class BruteForceOracle(Oracle):
    """Exact answers by dynamic programming over vertex subsets.

    The lowest remaining vertex is always matched first, so one memo table per
    component also serves every "delete two vertices" subquery.
    """

    name = "brute"

    def _solve_component(self, comp: QueryKey) -> Answer:
        solver = _SubsetDP(comp)
        return solver.solve(solver.full)

    def _solve_component_without(self, comp, pairs):
        solver = _SubsetDP(comp)
        out = {}
        for u, v in pairs:
            out[(u, v)] = solver.solve(solver.full & ~solver.bit[u] & ~solver.bit[v])
        return out


class _SubsetDP:
    def __init__(self, comp: QueryKey) -> None:
        nodes, edges = comp
        self.bit = {v: 1 << i for i, v in enumerate(nodes)}
        self.full = (1 << len(nodes)) - 1
        best: dict[tuple[int, int], int] = {}
        for _, u, v, w in edges:
            a, b = self.bit[u].bit_length() - 1, self.bit[v].bit_length() - 1
            k = (a, b) if a < b else (b, a)
            if k not in best or w < best[k]:
                best[k] = w
        self.adj: list[list[tuple[int, int]]] = [[] for _ in nodes]
        for (a, b), w in sorted(best.items()):
            self.adj[a].append((1 << b, w))
            self.adj[b].append((1 << a, w))
        self.memo: dict[int, Answer] = {0: 0}

    def solve(self, mask: int) -> Answer:
        if bin(mask).count("1") % 2:
            return None
        return self._f(mask)

    def _f(self, mask: int) -> Answer:
        memo = self.memo
        if mask in memo:
            return memo[mask]
        low = mask & -mask
        rest = mask ^ low
        best = None
        for nb, w in self.adj[low.bit_length() - 1]:
            if rest & nb:
                sub = self._f(rest ^ nb)
                if sub is not None and (best is None or sub + w < best):
                    best = sub + w
        memo[mask] = best
        return best


class TutteOracle(Oracle):
    """Randomised answers from the weighted Tutte matrix.

    Edge ``e = {u, v}`` contributes ``b_e * x**w_e`` at ``(u, v)`` and its
    negative at ``(v, u)``, with ``b_e`` pseudo-random in the prime field.
    The lowest ``x``-degree of the determinant is twice the minimum perfect
    matching weight with high probability; an identically zero determinant
    means no perfect matching.  The determinant is evaluated at ``D + 1``
    points and interpolated, ``D`` bounding its degree.

    ``b_e`` depends only on the seed, the retrial index and the edge id, so a
    subgraph query sees exactly a submatrix of its parent's matrix and every
    answer is a fixed function of its query key.
    """

    name = "tutte"

    def __init__(self, transcript: Optional[OracleTranscript] = None, *,
                 prime: int = DEFAULT_PRIME, seed: int = 0, retrials: int = 3,
                 max_points: int = 200_000) -> None:
        super().__init__(transcript)
        if not fieldmath.is_prime(prime):
            raise ValueError(f"{prime} is not prime")
        if prime > fieldmath.MAX_PRIME:
            raise ValueError(f"field prime must be below {fieldmath.MAX_PRIME}")
        if prime < 2**30:
            raise ValueError("field prime must exceed 2**30")
        if retrials < 1:
            raise ValueError("need at least one trial")
        self.prime = prime
        self.seed = seed
        self.retrials = retrials
        self.max_points = max_points
        self._coef: dict[tuple[int, int], int] = {}

    def coefficient(self, trial: int, edge: int) -> int:
        k = (trial, edge)
        c = self._coef.get(k)
        if c is None:
            h = hashlib.blake2b(f"{self.seed}:{trial}:{edge}".encode(), digest_size=8)
            c = int.from_bytes(h.digest(), "big") % (self.prime - 1) + 1
            self._coef[k] = c
        return c

    def _setup(self, comp: QueryKey):
        """Vertex potentials, evaluation group order and generator.

        Edge ``uv`` enters the matrix with exponent ``w - y_u - y_v``, where
        ``y_v`` is half the lightest edge at ``v``; exponents stay
        nonnegative and the determinant shrinks by ``x**(2 * sum(y))``.
        """
        nodes, edges = comp
        lightest: dict[int, int] = {}
        for _, u, v, w in edges:
            for x in (u, v):
                if x not in lightest or w < lightest[x]:
                    lightest[x] = w
        y = {x: c // 2 for x, c in lightest.items()}
        top = dict.fromkeys(nodes, 0)
        for _, u, v, w in edges:
            r = w - y[u] - y[v]
            top[u] = max(top[u], r)
            top[v] = max(top[v], r)
        # twice the heaviest reduced matching is at most the sum of the
        # heaviest reduced edge at each vertex
        degree = sum(top.values())
        if degree + 1 > self.max_points or 4 * degree >= self.prime:
            raise OracleError(f"determinant degree bound {degree} is too large")
        order, g = fieldmath.subgroup(degree + 1, self.prime)
        return y, order, g

    def _matrices(self, comp: QueryKey, trial: int, y: dict[int, int],
                  order: int, g: int) -> np.ndarray:
        """The reduced Tutte matrix evaluated at ``x = g**i`` for ``i < order``."""
        nodes, edges = comp
        p = self.prime
        idx = {v: i for i, v in enumerate(nodes)}
        n = len(nodes)
        pw = fieldmath.power_table(g, order, p)
        steps = np.arange(order, dtype=np.int64)
        mats = np.zeros((order, n, n), dtype=np.int64)
        for e, u, v, w in edges:
            term = pw[steps * (w - y[u] - y[v]) % order] * self.coefficient(trial, e) % p
            i, j = idx[u], idx[v]
            mats[:, i, j] = (mats[:, i, j] + term) % p
            mats[:, j, i] = (mats[:, j, i] - term) % p
        return mats

    @staticmethod
    def _from_lowest(low: int, shift: int) -> Answer:
        if low < 0:
            return None
        if low % 2:
            raise OracleError("odd lowest degree in a skew-symmetric determinant")
        return low // 2 + shift

    def _solve_component(self, comp: QueryKey) -> Answer:
        y, order, g = self._setup(comp)
        shift = sum(y.values())
        best = None
        for trial in range(self.retrials):
            dets = fieldmath.determinants(self._matrices(comp, trial, y, order, g), self.prime)
            low = int(fieldmath.lowest_degrees(dets[None, :], g, order, self.prime)[0])
            ans = self._from_lowest(low, shift)
            if ans is not None and (best is None or ans < best):
                best = ans
        return best

    def _solve_component_without(self, comp, pairs):
        nodes, _ = comp
        y, order, g = self._setup(comp)
        p = self.prime
        idx = {v: i for i, v in enumerate(nodes)}
        shift = sum(y.values())
        best: dict[tuple[int, int], Answer] = dict.fromkeys(pairs)
        for trial in range(self.retrials):
            det, inv, singular = fieldmath.det_and_inverse(
                self._matrices(comp, trial, y, order, g), p)
            if singular.any():
                # a singular evaluation point rules out the adjugate shortcut
                return {pair: self.solve(key_without(comp, pair)) for pair in pairs}
            ii = np.array([idx[u] for u, _ in pairs])
            jj = np.array([idx[v] for _, v in pairs])
            entries = inv[:, ii, jj].T
            rows = det[None, :] * (entries * entries % p) % p
            lows = fieldmath.lowest_degrees(rows, g, order, p)
            for pair, low in zip(pairs, lows):
                ans = self._from_lowest(int(low), shift - y[pair[0]] - y[pair[1]])
                if ans is not None and (best[pair] is None or ans < best[pair]):
                    best[pair] = ans
        return best


class ReplayOracle(Oracle):
    """Answers strictly from a recorded transcript."""

    name = "replay"

    def __init__(self, recorded: OracleTranscript,
                 transcript: Optional[OracleTranscript] = None) -> None:
        super().__init__(transcript)
        self.recorded = recorded

    def solve(self, key: QueryKey) -> Answer:
        hit, ans = self.recorded.get(key)
        if not hit:
            raise OracleError("query not present in the recorded transcript")
        return ans

    def solve_without(self, key, pairs):
        return {pair: self.solve(key_without(key, pair)) for pair in pairs}


def make_oracle(kind: str, *, prime: int = DEFAULT_PRIME, seed: int = 0,
                retrials: int = 3) -> Oracle:
    if kind == "brute":
        return BruteForceOracle()
    if kind == "tutte":
        return TutteOracle(prime=prime, seed=seed, retrials=retrials)
    raise ValueError(f"unknown oracle {kind!r}")


# -- primitives on top of the oracle -----------------------------------


def allowed_edges(minor: Minor, w: Mapping[int, int], oracle: Oracle) -> frozenset[int]:
    """Edges that lie in some minimum-weight perfect matching.

    ``e = {u, v}`` is allowed iff ``O(G) == w_e + O(G - u - v)``.
    """
    total = oracle.mwpm_weight(minor, w)
    if total is None:
        raise NoPerfectMatchingInput("graph has no perfect matching")
    pairs = list(dict.fromkeys(minor.edges.values()))
    sub = oracle.answers_without_pairs(minor, w, pairs)
    return frozenset(e for e, uv in minor.edges.items()
                     if sub[uv] is not None and sub[uv] + w[e] == total)


def mu_all(minor: Minor, w: Mapping[int, int], oracle: Oracle,
           allowed: Optional[Iterable[int]] = None) -> dict[int, int]:
    """``mu(v)`` for every node, from one batch of pair deletions."""
    if allowed is None:
        allowed = allowed_edges(minor, w, oracle)
    g = minor.restrict_edges(allowed)
    nodes = g.nodes
    pairs = [(nodes[i], nodes[j]) for i in range(len(nodes)) for j in range(i + 1, len(nodes))]
    sub = oracle.answers_without_pairs(g, w, pairs)
    best: dict[int, Optional[int]] = dict.fromkeys(nodes)
    for (u, v), ans in sub.items():
        if ans is None:
            continue
        for x in (u, v):
            if best[x] is None or ans < best[x]:
                best[x] = ans
    missing = [v for v, b in best.items() if b is None]
    if missing:
        raise NoWitness(f"no partner leaves a perfect matching for node {missing[0]}")
    return best  # type: ignore[return-value]


def mu(minor: Minor, w: Mapping[int, int], v: int, oracle: Oracle,
       allowed: Optional[Iterable[int]] = None) -> int:
    """Minimum over ``u != v`` of the optimum on the allowed subgraph minus ``u, v``."""
    if allowed is None:
        allowed = allowed_edges(minor, w, oracle)
    g = minor.restrict_edges(allowed)
    pairs = [(min(u, v), max(u, v)) for u in g.nodes if u != v]
    sub = oracle.answers_without_pairs(g, w, pairs)
    vals = [a for a in sub.values() if a is not None]
    if not vals:
        raise NoWitness(f"no partner leaves a perfect matching for node {v}")
    return min(vals)
