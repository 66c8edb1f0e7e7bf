"""Drop disallowed edges and contract the outermost tight odd sets."""

from __future__ import annotations

from collections.abc import Mapping

from .duals import component_dual
from .errors import LemmaViolation
from .graph import (LaminarFamily, Minor, connected_components, contract,
                    flip_heavy_sets)
from .oracle import Oracle, allowed_edges


def _serial(f, xs):
    return [f(x) for x in xs]


def contraction_sets(g: Minor, w: Mapping[int, int], oracle: Oracle,
                     pmap=None) -> list[frozenset[int]]:
    """Maximal non-singleton sets to contract in ``g`` (already restricted to allowed edges)."""
    run = pmap or _serial
    comps = connected_components(g)
    per = run(lambda c: component_dual(g.induced(c), w, oracle, run), comps)
    tops: list[frozenset[int]] = []
    for comp, found in zip(comps, per):
        fam = LaminarFamily.of([frozenset([v]) for v in comp] + found, g.node_weight)
        total = fam.weight(comp)
        flipped = flip_heavy_sets(fam, comp, total=total)
        for s in flipped.maximal():
            if 2 * fam.weight(s) > total:
                raise LemmaViolation(f"contracted set {sorted(s)} is heavier than half")
            tops.append(s)
    return sorted(tops, key=min)


def reduce(minor: Minor, w: Mapping[int, int], oracle: Oracle, pmap=None) -> Minor:
    """Matching minor of ``minor`` on the allowed edges with the outermost dual sets shrunk."""
    allowed = allowed_edges(minor, w, oracle)
    g = minor.restrict_edges(allowed)
    return contract(g, contraction_sets(g, w, oracle, pmap))
