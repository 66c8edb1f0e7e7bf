"""Support of the balanced critical dual, computed from oracle answers."""

from __future__ import annotations

from collections.abc import Collection, Mapping
from typing import Optional

from .errors import EvenComponentAtThreshold
from .graph import LaminarFamily, Minor, connected_components
from .oracle import Oracle, allowed_edges, mu_all


def _components_at(minor: Minor, wprime: Mapping[int, int], t: int) -> list[frozenset[int]]:
    keep = [e for e in minor.edges if wprime[e] <= t]
    return connected_components(minor.restrict_edges(keep))


def component_dual(comp: Minor, w: Mapping[int, int], oracle: Oracle,
                   pmap=None) -> list[frozenset[int]]:
    """Non-singleton dual sets of one connected component of the allowed subgraph.

    ``comp`` must contain only allowed edges.  The component itself is never
    returned.
    """
    if len(comp.nodes) <= 2:
        return []
    mu = mu_all(comp, w, oracle, allowed=comp.edges)
    wprime = {e: w[e] + mu[u] + mu[v] for e, (u, v) in comp.edges.items()}
    thresholds = sorted(set(wprime.values()))
    run = pmap if pmap is not None else (lambda f, xs: [f(x) for x in xs])
    found = run(lambda t: _components_at(comp, wprime, t), thresholds)
    whole = frozenset(comp.nodes)
    out: dict[frozenset[int], None] = {}
    for t, comps in zip(thresholds, found):
        for s in comps:
            if len(s) < 2 or s == whole:
                continue
            if comp.weight_of(s) % 2 == 0:
                raise EvenComponentAtThreshold(
                    f"component {sorted(s)} at threshold {t} has even weight")
            out[s] = None
    return list(out)


def balanced_critical_dual(minor: Minor, w: Mapping[int, int], oracle: Oracle,
                           allowed: Optional[Collection[int]] = None,
                           pmap=None) -> LaminarFamily:
    """Laminar family: all singletons plus the dual sets of every allowed component."""
    if not minor.nodes:
        return LaminarFamily.of([], {})
    if allowed is None:
        allowed = allowed_edges(minor, w, oracle)
    g = minor.restrict_edges(allowed)
    run = pmap if pmap is not None else (lambda f, xs: [f(x) for x in xs])
    comps = connected_components(g)
    per_comp = run(lambda c: component_dual(g.induced(c), w, oracle, run), comps)
    sets: list[frozenset[int]] = [frozenset([v]) for v in minor.nodes]
    for found in per_comp:
        sets.extend(found)
    family = LaminarFamily.of(sets, minor.node_weight)
    family.check()
    return family
