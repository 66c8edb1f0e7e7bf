"""Node-weighted multigraphs with contraction lineage.

A :class:`Minor` is an immutable multigraph whose nodes may stand for
several vertices of a *base* graph.  Edge ids are never renumbered: an edge of
a minor carries the id of the base edge it came from, so lifting a matching
back to the base graph needs no bookkeeping beyond the edge ids themselves.
"""

from __future__ import annotations

import threading
from collections import deque
from collections.abc import Collection, Iterable, Mapping
from dataclasses import dataclass
from typing import Optional

from .errors import DisconnectedSet, EvenSet, GraphError, NotLaminar, OverlappingSets

NodeSet = frozenset


@dataclass(frozen=True)
class Minor:
    """Immutable node-weighted multigraph.

    ``nodes`` is sorted, ``edges`` maps edge id to an ordered endpoint pair
    ``(u, v)`` with ``u < v`` and is kept sorted by id.  ``lineage_vertex``
    maps every base vertex that is still represented to the node it was
    shrunk into.
    """

    nodes: tuple[int, ...]
    node_weight: Mapping[int, int]
    edges: Mapping[int, tuple[int, int]]
    lineage_vertex: Mapping[int, int]

    __hash__ = None  # type: ignore[assignment]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Minor:
        """Base graph on vertices ``0..n-1``; edge ids follow iteration order."""
        es: dict[int, tuple[int, int]] = {}
        for i, (u, v) in enumerate(edges):
            if u == v:
                raise GraphError(f"edge {i} is a self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge {i} = ({u}, {v}) out of range for n={n}")
            es[i] = (u, v) if u < v else (v, u)
        nodes = tuple(range(n))
        return cls(nodes, {v: 1 for v in nodes}, es, {v: v for v in nodes})

    @classmethod
    def build(
        cls,
        nodes: Iterable[int],
        node_weight: Mapping[int, int],
        edges: Mapping[int, tuple[int, int]] | Iterable[tuple[int, tuple[int, int]]],
        lineage_vertex: Mapping[int, int],
    ) -> Minor:
        items = edges.items() if isinstance(edges, Mapping) else edges
        es = {e: (u, v) if u < v else (v, u) for e, (u, v) in sorted(items)}
        ns = tuple(sorted(nodes))
        return cls(ns, {v: node_weight[v] for v in ns}, es, dict(lineage_vertex))

    # -- basic queries -------------------------------------------------

    @property
    def lineage_edge(self) -> dict[int, int]:
        return {e: e for e in self.edges}

    @property
    def total_weight(self) -> int:
        return sum(self.node_weight.values())

    def weight_of(self, nodes: Iterable[int]) -> int:
        return sum(self.node_weight[v] for v in nodes)

    def degrees(self) -> dict[int, int]:
        deg = dict.fromkeys(self.nodes, 0)
        for u, v in self.edges.values():
            deg[u] += 1
            deg[v] += 1
        return deg

    def adjacency(self) -> dict[int, list[tuple[int, int]]]:
        """node -> list of ``(neighbour, edge id)`` in edge-id order."""
        adj: dict[int, list[tuple[int, int]]] = {v: [] for v in self.nodes}
        for e, (u, v) in self.edges.items():
            adj[u].append((v, e))
            adj[v].append((u, e))
        return adj

    def incident_edges(self, node: int) -> list[int]:
        return [e for e, (u, v) in self.edges.items() if node in (u, v)]

    def preimage(self, node: int) -> frozenset[int]:
        return frozenset(b for b, x in self.lineage_vertex.items() if x == node)

    def preimages(self) -> dict[int, frozenset[int]]:
        groups: dict[int, set[int]] = {v: set() for v in self.nodes}
        for b, x in self.lineage_vertex.items():
            groups[x].add(b)
        return {v: frozenset(s) for v, s in groups.items()}

    # -- derived minors ------------------------------------------------

    def restrict_edges(self, keep: Collection[int]) -> Minor:
        keep = set(keep)
        es = {e: uv for e, uv in self.edges.items() if e in keep}
        return Minor(self.nodes, self.node_weight, es, self.lineage_vertex)

    def without_nodes(self, drop: Iterable[int]) -> Minor:
        drop = set(drop)
        return self.induced(v for v in self.nodes if v not in drop)

    def induced(self, keep: Iterable[int]) -> Minor:
        keep = set(keep)
        nodes = tuple(v for v in self.nodes if v in keep)
        es = {e: (u, v) for e, (u, v) in self.edges.items() if u in keep and v in keep}
        lin = {b: x for b, x in self.lineage_vertex.items() if x in keep}
        return Minor(nodes, {v: self.node_weight[v] for v in nodes}, es, lin)

    def rebased(self) -> Minor:
        """Same graph, unit node weights, lineage relative to these nodes."""
        return Minor(self.nodes, dict.fromkeys(self.nodes, 1), self.edges,
                     {v: v for v in self.nodes})

    def check(self) -> None:
        """Raise ``GraphError`` if a structural invariant is broken."""
        ns = set(self.nodes)
        if list(self.nodes) != sorted(ns):
            raise GraphError("nodes not sorted/unique")
        for e, (u, v) in self.edges.items():
            if u == v:
                raise GraphError(f"self-loop on edge {e}")
            if u not in ns or v not in ns:
                raise GraphError(f"edge {e} has an endpoint outside the node set")
        if self.total_weight != len(self.lineage_vertex):
            raise GraphError("node weights do not add up to the base vertex count")
        for v in self.nodes:
            w = self.node_weight[v]
            if w < 1 or (w > 1 and w % 2 == 0):
                raise GraphError(f"node {v} has invalid weight {w}")
        for b, x in self.lineage_vertex.items():
            if x not in ns:
                raise GraphError(f"base vertex {b} maps to missing node {x}")
        counts = {v: 0 for v in self.nodes}
        for x in self.lineage_vertex.values():
            counts[x] += 1
        if counts != dict(self.node_weight):
            raise GraphError("lineage disagrees with node weights")


# -- predicates --------------------------------------------------------


def non_isolated_edge_count(minor: Minor) -> int:
    deg = minor.degrees()
    return sum(1 for u, v in minor.edges.values() if deg[u] >= 2 or deg[v] >= 2)


def is_perfect_matching_graph(minor: Minor) -> bool:
    return all(d == 1 for d in minor.degrees().values())


def connected_components(minor: Minor) -> list[frozenset[int]]:
    """Components ordered by their smallest node id."""
    adj = minor.adjacency()
    seen: set[int] = set()
    out = []
    for s in minor.nodes:
        if s in seen:
            continue
        comp = {s}
        seen.add(s)
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y, _ in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.add(y)
                    queue.append(y)
        out.append(frozenset(comp))
    return out


def is_connected_within(minor: Minor, nodes: Collection[int]) -> bool:
    nodes = set(nodes)
    if len(nodes) <= 1:
        return True
    adj: dict[int, list[int]] = {v: [] for v in nodes}
    for u, v in minor.edges.values():
        if u in nodes and v in nodes:
            adj[u].append(v)
            adj[v].append(u)
    start = min(nodes)
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(nodes)


# -- contraction -------------------------------------------------------


class ContractionAudit:
    """Counts connectivity checks made by ``contract`` across a process."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self.checked = 0
        self.violations = 0

    def record(self, ok: bool) -> None:
        with self._lock:
            self.checked += 1
            if not ok:
                self.violations += 1


CONTRACTION_AUDIT = ContractionAudit()


def contract(minor: Minor, sets: Iterable[Collection[int]], *,
             require_connected: bool = True) -> Minor:
    """Shrink each of the given disjoint odd node sets to one node.

    The new node keeps the smallest id of its members.  Edges inside a set
    disappear, edges leaving it are re-attached, parallel edges are kept.
    ``require_connected=False`` is reserved for the one contraction whose
    result never reaches the oracle (complement of a heavy node).
    """
    groups = [frozenset(s) for s in sets if len(s) > 0]
    ns = set(minor.nodes)
    used: set[int] = set()
    for s in groups:
        if not s <= ns:
            raise GraphError(f"set {sorted(s)} has nodes outside the minor")
        if used & s:
            raise OverlappingSets(f"set {sorted(s)} overlaps an earlier set")
        used |= s
    for s in groups:
        if minor.weight_of(s) % 2 == 0:
            raise EvenSet(f"set {sorted(s)} has even node weight {minor.weight_of(s)}")
        if require_connected and len(s) > 1:
            ok = is_connected_within(minor, s)
            CONTRACTION_AUDIT.record(ok)
            if not ok:
                raise DisconnectedSet(f"set {sorted(s)} is not connected")
    rep = {v: v for v in minor.nodes}
    for s in groups:
        r = min(s)
        for v in s:
            rep[v] = r
    nodes = sorted(set(rep.values()))
    weight = dict.fromkeys(nodes, 0)
    for v in minor.nodes:
        weight[rep[v]] += minor.node_weight[v]
    es = {}
    for e, (u, v) in minor.edges.items():
        a, b = rep[u], rep[v]
        if a != b:
            es[e] = (a, b) if a < b else (b, a)
    lin = {x: rep[y] for x, y in minor.lineage_vertex.items()}
    return Minor(tuple(nodes), weight, es, lin)


def dedupe_parallel_edges(minor: Minor) -> Minor:
    """Keep only the smallest edge id between every pair of nodes."""
    seen: set[tuple[int, int]] = set()
    keep = []
    for e, uv in sorted(minor.edges.items()):
        if uv not in seen:
            seen.add(uv)
            keep.append(e)
    return minor.restrict_edges(keep)


# -- laminar families --------------------------------------------------


def _crosses(a: frozenset, b: frozenset) -> bool:
    return bool(a & b) and not (a <= b or b <= a)


@dataclass(frozen=True)
class LaminarFamily:
    """Node sets over a fixed minor, plus the node weights used for parity."""

    sets: tuple[frozenset[int], ...]
    node_weight: Mapping[int, int]

    __hash__ = None  # type: ignore[assignment]

    @classmethod
    def of(cls, sets: Iterable[Iterable[int]], node_weight: Mapping[int, int]) -> LaminarFamily:
        uniq = {frozenset(s) for s in sets}
        uniq.discard(frozenset())
        ordered = tuple(sorted(uniq, key=lambda s: (len(s), sorted(s))))
        return cls(ordered, dict(node_weight))

    def weight(self, s: Iterable[int]) -> int:
        return sum(self.node_weight[v] for v in s)

    def is_odd(self, s: Iterable[int]) -> bool:
        return self.weight(s) % 2 == 1

    @property
    def non_singletons(self) -> list[frozenset[int]]:
        return [s for s in self.sets if len(s) > 1]

    @property
    def even_sets(self) -> list[frozenset[int]]:
        return [s for s in self.non_singletons if not self.is_odd(s)]

    def is_laminar(self) -> bool:
        ss = self.sets
        return not any(_crosses(ss[i], ss[j])
                       for i in range(len(ss)) for j in range(i + 1, len(ss)))

    def check(self) -> None:
        ss = self.sets
        for i in range(len(ss)):
            for j in range(i + 1, len(ss)):
                if _crosses(ss[i], ss[j]):
                    raise NotLaminar(f"{sorted(ss[i])} crosses {sorted(ss[j])}")

    def restricted(self, component: Collection[int]) -> LaminarFamily:
        comp = frozenset(component)
        return LaminarFamily(tuple(s for s in self.sets if s <= comp), self.node_weight)

    def maximal(self, *, non_singleton: bool = True) -> list[frozenset[int]]:
        """Inclusion-wise maximal members, ordered by smallest node."""
        pool = self.non_singletons if non_singleton else list(self.sets)
        tops = [s for s in pool if not any(s < t for t in pool)]
        return sorted(tops, key=min)

    def __contains__(self, s: object) -> bool:
        return frozenset(s) in set(self.sets)  # type: ignore[arg-type]

    def __len__(self) -> int:
        return len(self.sets)


def flip_heavy_sets(family: LaminarFamily, component: Collection[int],
                    *, total: Optional[int] = None) -> LaminarFamily:
    """Replace each member heavier than half the component by its complement.

    A member equal to the whole component would flip to the empty set and is
    dropped.  The result is checked for laminarity.
    """
    comp = frozenset(component)
    if total is None:
        total = family.weight(comp)
    out = []
    for s in family.sets:
        if not s <= comp:
            raise GraphError(f"set {sorted(s)} is not inside the component")
        if 2 * family.weight(s) > total:
            s = comp - s
        if s:
            out.append(s)
    flipped = LaminarFamily.of(out, family.node_weight)
    flipped.check()
    return flipped
