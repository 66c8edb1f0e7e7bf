import random

from hypothesis import given, settings

from ncmatch.graph import CONTRACTION_AUDIT, Minor, connected_components
from ncmatch.oracle import BruteForceOracle
from ncmatch.reduce import reduce

from conftest import PRISM_WEIGHTS, all_perfect_matchings, reference_optimum, weighted_graphs


def test_two_triangles_reduce_to_their_unique_matching(two_triangles):
    h = reduce(two_triangles, [0] * 7, BruteForceOracle())
    assert h.nodes == tuple(range(6))
    assert h.edges == {0: (0, 1), 3: (2, 3), 5: (4, 5)}


def test_k2_is_unchanged(k2):
    assert reduce(k2, [0], BruteForceOracle()) == k2


def test_four_cycle_keeps_the_optimal_matching(c4):
    h = reduce(c4, [1, 2, 3, 4], BruteForceOracle())
    assert h.edges == {0: (0, 1), 2: (2, 3)}
    assert h.nodes == c4.nodes


def test_prism_contracts_both_triangles(prism):
    h = reduce(prism, PRISM_WEIGHTS, BruteForceOracle())
    assert h.nodes == (0, 3)
    assert h.node_weight == {0: 3, 3: 3}
    assert h.edges == {6: (0, 3), 7: (0, 3), 8: (0, 3)}


def _lift_weight(g, w, h, m_h):
    """Weight of the cheapest lift of the matching ``m_h`` of ``h`` to ``g``."""
    total = sum(w[e] for e in m_h)
    parts = h.preimages()
    for node in h.nodes:
        part = parts[node]
        if len(part) == 1:
            continue
        (e,) = [e for e in m_h if node in h.edges[e]]
        x = next(v for v in g.edges[e] if v in part)
        inner = sorted(part - {x})
        idx = {v: i for i, v in enumerate(inner)}
        es = [(e2, uv) for e2, uv in g.edges.items() if uv[0] in idx and uv[1] in idx]
        opt, _ = reference_optimum(len(inner), [(idx[u], idx[v]) for _, (u, v) in es],
                                   [w[e2] for e2, _ in es])
        assert opt is not None, "contracted piece cannot be completed"
        total += opt
    return total


@given(weighted_graphs(min_n=2, max_n=10, max_w=3, even=True))
@settings(max_examples=150, deadline=None)
def test_every_matching_of_the_minor_lifts_to_an_optimum(gw):
    g, w = gw
    o = BruteForceOracle()
    opt = o.mwpm_weight(g, w)
    if opt is None:
        return
    before = CONTRACTION_AUDIT.violations
    h = reduce(g, w, o)
    assert CONTRACTION_AUDIT.violations == before
    h.check()
    for comp in connected_components(h):
        total = sum(h.node_weight[v] for v in comp)
        assert all(2 * h.node_weight[v] <= total for v in comp)
    order = sorted(h.edges)
    ends = [h.edges[e] for e in order]
    idx = {v: i for i, v in enumerate(h.nodes)}
    pms = all_perfect_matchings(len(h.nodes), [(idx[u], idx[v]) for u, v in ends])
    assert pms
    for pm in pms[:20]:
        assert _lift_weight(g, w, h, [order[i] for i in pm]) == opt


def test_reduce_issues_only_connected_contractions():
    rng = random.Random(3)
    before = (CONTRACTION_AUDIT.checked, CONTRACTION_AUDIT.violations)
    o = BruteForceOracle()
    for _ in range(100):
        n = rng.choice([6, 8, 10, 12])
        g = Minor.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)
                                 if rng.random() < 0.5])
        w = [rng.randint(0, 1) for _ in g.edges]
        if o.mwpm_weight(g, w) is not None:
            reduce(g, w, o)
    assert CONTRACTION_AUDIT.checked > before[0]
    assert CONTRACTION_AUDIT.violations == before[1]
