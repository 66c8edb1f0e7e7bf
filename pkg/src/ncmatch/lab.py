"""Constructive versions of the structural lemmas: cycle packing, token
pairing on trees, even-walk assembly and walk destruction evidence.

These never feed the matching pipeline; the test suite uses them to check
the counting bounds on concrete graphs.
"""

from __future__ import annotations

import math
from collections import deque
from collections.abc import Collection, Mapping, Sequence
from dataclasses import dataclass
from typing import Optional

from .errors import InvalidWalk, LemmaViolation, OddTokens
from .graph import LaminarFamily, Minor
from .mis import luby_mis
from .oracle import Oracle, allowed_edges
from .walks import EvenWalk, circulation, mismatch

Cycle = list[int]


# -- edge-disjoint cycles -----------------------------------------------


class _Multigraph:
    """Mutable multigraph whose edges remember the original path they stand for."""

    def __init__(self, minor: Minor) -> None:
        self.ends: dict[int, tuple[int, int]] = {}
        self.path: dict[int, list[int]] = {}      # original edges, oriented ends[0] -> ends[1]
        self.inc: dict[int, set[int]] = {v: set() for v in minor.nodes}
        self.deg: dict[int, int] = dict.fromkeys(minor.nodes, 0)
        self.by_pair: dict[tuple[int, int], set[int]] = {}
        self.orig_ends = dict(minor.edges)
        self.next_id = 0
        for e, (u, v) in sorted(minor.edges.items()):
            self._add(u, v, [e])

    def _add(self, u: int, v: int, path: list[int]) -> int:
        k = self.next_id
        self.next_id += 1
        self.ends[k] = (u, v)
        self.path[k] = path
        self.inc[u].add(k)
        self.inc[v].add(k)
        self.deg[u] += 1
        self.deg[v] += 1
        self.by_pair.setdefault((min(u, v), max(u, v)), set()).add(k)
        return k

    def remove_edge(self, k: int) -> None:
        u, v = self.ends.pop(k)
        self.path.pop(k)
        self.inc[u].discard(k)
        self.inc[v].discard(k)
        self.deg[u] -= 1
        self.deg[v] -= 1
        key = (min(u, v), max(u, v))
        self.by_pair[key].discard(k)
        if not self.by_pair[key]:
            del self.by_pair[key]

    def oriented(self, k: int, start: int) -> tuple[list[int], int]:
        u, v = self.ends[k]
        if start == u:
            return list(self.path[k]), v
        return self.path[k][::-1], u

    def degree(self, v: int) -> int:
        return self.deg[v]

    def take_cycle(self, ks: Sequence[int], start: int) -> Cycle:
        out: Cycle = []
        cur = start
        for k in ks:
            seg, cur = self.oriented(k, cur)
            out.extend(seg)
        for k in ks:
            self.remove_edge(k)
        return out


def _shortest_cycle(mg: _Multigraph) -> tuple[list[int], int]:
    """Shortest cycle of a simple multigraph by BFS from each vertex; ties by root id."""
    best: Optional[tuple[int, int, list[int]]] = None
    for root in sorted(v for v in mg.inc if mg.inc[v]):
        dist = {root: 0}
        parent: dict[int, tuple[int, int]] = {}
        queue = deque([root])
        found: Optional[tuple[int, list[int]]] = None
        while queue and found is None:
            x = queue.popleft()
            if best is not None and 2 * dist[x] + 1 >= best[0]:
                break   # nothing shorter than the current best can close from here
            for k in sorted(mg.inc[x]):
                if x != root and parent[x][1] == k:
                    continue
                u, v = mg.ends[k]
                y = v if u == x else u
                if y not in dist:
                    dist[y] = dist[x] + 1
                    parent[y] = (x, k)
                    queue.append(y)
                else:
                    length = dist[x] + dist[y] + 1

                    def up(z: int) -> list[int]:
                        ks = []
                        while z != root:
                            z, k2 = parent[z]
                            ks.append(k2)
                        return ks

                    left, right = up(x), up(y)
                    found = (length, left[::-1] + [k] + right)
                    break
        if found is not None and (best is None or found[0] < best[0]):
            best = (found[0], root, found[1])
    assert best is not None
    return best[2], best[1]


def extract_edge_disjoint_cycles(graph: Minor) -> list[Cycle]:
    """Edge-disjoint cycles by peeling loops, parallel pairs, low-degree
    vertices and short cycles.  Cycles are lists of edge ids in traversal order.
    """
    mg = _Multigraph(graph)
    order = sorted(mg.inc)
    cycles: list[Cycle] = []
    while mg.ends:
        loop = next((k for k in sorted(mg.ends) if mg.ends[k][0] == mg.ends[k][1]), None)
        if loop is not None:
            cycles.append(mg.take_cycle([loop], mg.ends[loop][0]))
            continue
        pair = None
        for key, ks in mg.by_pair.items():
            if len(ks) > 1 and key[0] != key[1]:
                first, second = sorted(ks)[:2]
                if pair is None or (second, first) < (pair[1], pair[0]):
                    pair = (first, second, key[0])
        if pair is not None:
            cycles.append(mg.take_cycle([pair[0], pair[1]], pair[2]))
            continue
        low = next((v for v in order if 0 < mg.deg[v] <= 1), None)
        if low is not None:
            for k in list(mg.inc[low]):
                mg.remove_edge(k)
            continue
        mid = next((v for v in order if mg.deg[v] == 2), None)
        if mid is not None:
            k1, k2 = sorted(mg.inc[mid])
            p1, a = mg.oriented(k1, mid)
            p2, b = mg.oriented(k2, mid)
            mg.remove_edge(k1)
            mg.remove_edge(k2)
            mg._add(a, b, p1[::-1] + p2)
            continue
        ks, root = _shortest_cycle(mg)
        cycles.append(mg.take_cycle(ks, root))
    return cycles


def cycle_vertices(graph: Minor, cycle: Cycle) -> list[int]:
    """Vertex sequence of a cycle given as consecutive edge ids (closed, first = last)."""
    if len(cycle) == 1:
        u, v = graph.edges[cycle[0]]
        return [u, v, u] if u != v else [u, u]
    a, b = graph.edges[cycle[0]]
    c, d = graph.edges[cycle[1]]
    start = a if b in (c, d) else b
    if len(cycle) == 2:
        start = min(a, b)
    verts = [start]
    for e in cycle:
        u, v = graph.edges[e]
        verts.append(v if verts[-1] == u else u)
    return verts


def cycle_bound(n: int, m: int) -> float:
    if n < 2:
        return 0.0
    return (m - n) / (2 * math.log2(n))


# -- token pairing ---------------------------------------------------------


@dataclass(frozen=True)
class TreePath:
    source: int          # token index
    target: int
    vertices: tuple[int, ...]
    edges: tuple[int, ...]


def spanning_forest(graph: Minor) -> Minor:
    """BFS forest rooted at the smallest vertex of each component."""
    adj = graph.adjacency()
    seen: set[int] = set()
    keep = []
    for root in graph.nodes:
        if root in seen:
            continue
        seen.add(root)
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y, e in sorted(adj[x]):
                if y not in seen:
                    seen.add(y)
                    keep.append(e)
                    queue.append(y)
    return graph.restrict_edges(keep)


def pair_tokens_on_tree(tree: Minor, tokens: Sequence[int]) -> list[TreePath]:
    """Pair the tokens so that the tree paths between partners are edge-disjoint.

    Works bottom-up: each subtree hands at most one unpaired token to its
    parent, so every tree edge carries at most one path.
    """
    if len(tokens) % 2:
        raise OddTokens(f"{len(tokens)} tokens cannot be paired")
    if len(tree.edges) != len(tree.nodes) - len(_components(tree)):
        raise ValueError("pairing needs a forest")
    at: dict[int, list[int]] = {}
    for i, v in enumerate(tokens):
        at.setdefault(v, []).append(i)
    adj = tree.adjacency()
    out: list[TreePath] = []
    seen: set[int] = set()
    for root in tree.nodes:
        if root in seen:
            continue
        # iterative post-order
        order, parent = [], {root: (None, None)}
        stack = [root]
        seen.add(root)
        while stack:
            x = stack.pop()
            order.append(x)
            for y, e in sorted(adj[x], reverse=True):
                if y not in seen:
                    seen.add(y)
                    parent[y] = (x, e)
                    stack.append(y)
        carry: dict[int, Optional[tuple[int, list[int], list[int]]]] = {}
        for x in reversed(order):
            # (token, vertices from token to x, edges from token to x)
            pending = [(t, [x], []) for t in at.get(x, [])]
            for y, e in sorted(adj[x]):
                if parent.get(y, (None,))[0] == x and carry.get(y) is not None:
                    t, vs, es = carry[y]
                    pending.append((t, vs + [x], es + [e]))
            while len(pending) >= 2:
                (t1, v1, e1), (t2, v2, e2) = pending.pop(0), pending.pop(0)
                out.append(TreePath(t1, t2, tuple(v1 + v2[::-1][1:]), tuple(e1 + e2[::-1])))
            carry[x] = pending[0] if pending else None
        if carry[root] is not None:
            raise OddTokens(f"a component holds an odd number of tokens")
    return sorted(out, key=lambda p: (p.source, p.target))


def _components(graph: Minor) -> list[frozenset[int]]:
    from .graph import connected_components
    return connected_components(graph)


# -- even walks from odd cycles -------------------------------------------


def _rotate(graph: Minor, cycle: Cycle, at: int) -> list[int]:
    verts = cycle_vertices(graph, cycle)[:-1]
    i = verts.index(at)
    return cycle[i:] + cycle[:i]


def join_odd_cycles(graph: Minor, c1: Cycle, c2: Cycle, path: TreePath) -> EvenWalk:
    """Even walk from two odd cycles and a tree path from a vertex of ``c1`` to one of ``c2``.

    Only the stretch from the last exit out of ``c1`` to the first vertex of
    ``c2`` is used, so the joining path shares no edge with either cycle.
    """
    v1 = set(cycle_vertices(graph, c1))
    v2 = set(cycle_vertices(graph, c2))
    pv = path.vertices
    a = max(i for i, x in enumerate(pv) if x in v1)
    b = next(i for i in range(a, len(pv)) if pv[i] in v2)
    sub = list(path.edges[a:b])
    edges = _rotate(graph, c1, pv[a]) + sub + _rotate(graph, c2, pv[b]) + sub[::-1]
    return EvenWalk.build(graph, edges, start=pv[a])


def build_even_walks(graph: Minor, odd_cycles: Sequence[Cycle], seed: int = 0) -> list[EvenWalk]:
    """Edge-disjoint even walks assembled from pairs of edge-disjoint odd cycles."""
    if not odd_cycles:
        return []
    for c in odd_cycles:
        if len(c) % 2 == 0:
            raise InvalidWalk("build_even_walks needs odd cycles")
    tree = spanning_forest(graph)
    where = {v: i for i, comp in enumerate(_components(graph)) for v in comp}
    tokens = [min(cycle_vertices(graph, c)) for c in odd_cycles]
    # tokens cannot be paired across components; drop the last cycle of any odd one
    by_comp: dict[int, list[int]] = {}
    for i, v in enumerate(tokens):
        by_comp.setdefault(where[v], []).append(i)
    keep = sorted(i for idx in by_comp.values() for i in idx[:len(idx) - len(idx) % 2])
    if not keep:
        return []
    cycles = [odd_cycles[i] for i in keep]
    paths = pair_tokens_on_tree(tree, [tokens[i] for i in keep])
    walks = [join_odd_cycles(graph, cycles[p.source], cycles[p.target], p) for p in paths]
    # keep walks at most twice the average length
    avg = sum(len(w) for w in walks) / len(walks)
    walks = [w for w in walks if len(w) <= 2 * avg]
    owners: dict[int, list[int]] = {}
    for i, w in enumerate(walks):
        for e in set(w.edges):
            owners.setdefault(e, []).append(i)
    adjacency = [sorted({j for e in set(w.edges) for j in owners[e] if j != i})
                 for i, w in enumerate(walks)]
    chosen, _ = luby_mis(adjacency, seed)
    return [walks[i] for i in chosen]


def many_even_walks(graph: Minor, seed: int = 0) -> list[EvenWalk]:
    """Edge-disjoint even walks: the even cycles of a cycle packing, or, if odd
    cycles are the majority, walks joining pairs of them."""
    cycles = extract_edge_disjoint_cycles(graph)
    even = [c for c in cycles if len(c) % 2 == 0]
    odd = [c for c in cycles if len(c) % 2 == 1]
    if len(even) >= len(odd):
        return [EvenWalk.build(graph, c, start=cycle_vertices(graph, c)[0]) for c in even]
    if len(odd) % 2:
        odd = odd[:-1]
    return build_even_walks(graph, odd, seed)


# -- destruction evidence -----------------------------------------------------


@dataclass(frozen=True)
class Evidence:
    kind: str                              # "disallowed" or "mismatch"
    edge: int                              # disallowed edge, or a walk edge inside the set
    tight_set: Optional[frozenset[int]] = None
    mismatch: int = 0


def verify_walk_destruction(minor: Minor, w: Mapping[int, int], walk: EvenWalk,
                            family: LaminarFamily, oracle: Optional[Oracle] = None,
                            allowed: Optional[Collection[int]] = None) -> Evidence:
    """Why a walk with positive circulation cannot survive: a disallowed edge
    on it, or a family set it mismatches together with an edge inside that set."""
    if circulation(w, walk) == 0:
        raise ValueError("walk has zero circulation")
    if allowed is None:
        if oracle is None:
            raise ValueError("need either the allowed edges or an oracle")
        allowed = allowed_edges(minor, w, oracle)
    allowed = set(allowed)
    for e in walk.edges:
        if e not in allowed:
            return Evidence("disallowed", e)
    for s in sorted(family.non_singletons, key=lambda s: (len(s), sorted(s))):
        mis = mismatch(walk, s)
        if mis > 0:
            inner = next((e for e, (u, v) in zip(walk.edges, walk.ends)
                          if u in s and v in s), None)
            if inner is None:
                raise LemmaViolation(f"walk mismatches {sorted(s)} without entering it")
            return Evidence("mismatch", inner, s, mis)
    raise LemmaViolation("positive-circulation walk on allowed edges mismatches no tight set")
