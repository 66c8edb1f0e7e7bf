import random

import pytest
from hypothesis import given, settings

from ncmatch.errors import DisconnectedSet, EvenSet, GraphError, NotLaminar, OverlappingSets
from ncmatch.graph import (CONTRACTION_AUDIT, LaminarFamily, Minor, connected_components,
                           contract, dedupe_parallel_edges, flip_heavy_sets,
                           is_perfect_matching_graph, non_isolated_edge_count)

from conftest import graphs


def test_from_edges_rejects_loops_and_bad_vertices():
    with pytest.raises(GraphError):
        Minor.from_edges(2, [(0, 0)])
    with pytest.raises(GraphError):
        Minor.from_edges(2, [(0, 2)])


def test_contract_two_triangles_leaves_the_bridge(two_triangles):
    h = contract(two_triangles, [{0, 1, 2}, {3, 4, 5}])
    assert h.nodes == (0, 3)
    assert h.edges == {3: (0, 3)}
    assert h.node_weight == {0: 3, 3: 3}
    assert h.lineage_edge == {3: 3}
    assert h.lineage_vertex == {0: 0, 1: 0, 2: 0, 3: 3, 4: 3, 5: 3}
    h.check()


def test_contract_nothing_is_identity(two_triangles):
    assert contract(two_triangles, []) == two_triangles


def test_contract_rejects_even_overlapping_and_disconnected(two_triangles):
    with pytest.raises(EvenSet):
        contract(two_triangles, [{0, 1}])
    with pytest.raises(OverlappingSets):
        contract(two_triangles, [{0, 1, 2}, {2, 3, 4}])
    before = CONTRACTION_AUDIT.violations
    with pytest.raises(DisconnectedSet):
        contract(two_triangles, [{0, 1, 5}])
    assert CONTRACTION_AUDIT.violations == before + 1
    # undo the deliberate violation so the suite-wide audit stays meaningful
    CONTRACTION_AUDIT.violations -= 1


def test_contract_keeps_parallel_edges_and_dedupe_keeps_smallest_id(prism):
    h = contract(prism, [{0, 1, 2}, {3, 4, 5}])
    assert h.edges == {6: (0, 3), 7: (0, 3), 8: (0, 3)}
    assert dedupe_parallel_edges(h).edges == {6: (0, 3)}


def test_nested_contraction_composes_lineage(prism):
    h = contract(prism, [{0, 1, 2}])
    h2 = contract(h, [{0, 3, 4}])
    assert h2.node_weight == {0: 5, 5: 1}
    assert h2.lineage_vertex == {0: 0, 1: 0, 2: 0, 3: 0, 4: 0, 5: 5}
    assert h2.preimage(0) == frozenset({0, 1, 2, 3, 4})
    h2.check()


def test_non_isolated_edge_count_examples(k2, c4):
    assert non_isolated_edge_count(k2) == 0
    assert non_isolated_edge_count(c4) == 4
    assert non_isolated_edge_count(Minor.from_edges(4, [(0, 1), (1, 2), (2, 3)])) == 3


def test_is_perfect_matching_graph_examples(k2, c4):
    assert is_perfect_matching_graph(k2)
    assert not is_perfect_matching_graph(c4)
    assert is_perfect_matching_graph(Minor.from_edges(0, []))


def test_connected_components_examples(c4):
    two = Minor.from_edges(4, [(2, 3), (0, 1)])
    assert connected_components(two) == [frozenset({0, 1}), frozenset({2, 3})]
    assert connected_components(c4) == [frozenset(range(4))]
    assert connected_components(Minor.from_edges(0, [])) == []


def test_flip_without_heavy_sets_is_identity():
    weights = dict.fromkeys(range(7), 1)
    fam = LaminarFamily.of([{0}, {1}, {0, 1, 2}], weights)
    assert flip_heavy_sets(fam, range(7)).sets == fam.sets


def test_flip_heavy_set_of_odd_component_gives_even_complement():
    weights = dict.fromkeys(range(7), 1)
    fam = LaminarFamily.of([{v} for v in range(7)] + [{0, 1, 2}, {0, 1, 2, 3, 4}], weights)
    out = flip_heavy_sets(fam, range(7))
    assert frozenset({5, 6}) in out
    assert out.even_sets == [frozenset({5, 6})]
    assert out.is_laminar()


def test_flip_nested_sets_become_disjoint():
    weights = dict.fromkeys(range(10), 1)
    fam = LaminarFamily.of([{0, 1, 2}, {0, 1, 2, 3, 4, 5, 6}], weights)
    out = flip_heavy_sets(fam, range(10))
    s, t = out.sets
    assert not s & t


def test_laminar_check_rejects_crossing():
    fam = LaminarFamily.of([{0, 1, 2}, {2, 3, 4}], dict.fromkeys(range(5), 1))
    assert not fam.is_laminar()
    with pytest.raises(NotLaminar):
        fam.check()


def _random_laminar(rng: random.Random, universe: list[int]) -> list[frozenset[int]]:
    """Random laminar family by recursive splitting."""
    out = []

    def split(block: list[int]) -> None:
        if len(block) > 1 and rng.random() < 0.8:
            out.append(frozenset(block))
        if len(block) <= 1:
            return
        rng.shuffle(block)
        parts = rng.randint(1, min(4, len(block)))
        cuts = sorted(rng.sample(range(1, len(block)), parts - 1)) if parts > 1 else []
        prev = 0
        for c in cuts + [len(block)]:
            split(block[prev:c])
            prev = c

    split(list(universe))
    return out + [frozenset([v]) for v in universe]


def test_flip_keeps_laminarity_on_ten_thousand_random_families():
    rng = random.Random(2024)
    for _ in range(10_000):
        n = rng.randint(1, 14)
        weights = {v: rng.choice([1, 1, 1, 3, 5]) for v in range(n)}
        fam = LaminarFamily.of(_random_laminar(rng, list(range(n))), weights)
        assert fam.is_laminar()
        out = flip_heavy_sets(fam, range(n))
        assert out.is_laminar()
        total = fam.weight(range(n))
        assert all(2 * out.weight(s) <= total for s in out.sets)


@given(graphs(max_n=9))
@settings(max_examples=150, deadline=None)
def test_contracting_connected_odd_sets_conserves_weight(g):
    comps = [c for c in connected_components(g) if len(c) % 2 == 1 and len(c) > 1]
    h = contract(g, comps)
    h.check()
    assert h.total_weight == len(g.nodes)
    assert all(h.node_weight[v] % 2 == 1 for v in h.nodes if h.node_weight[v] > 1)
    assert set(h.edges) <= set(g.edges)


def test_rebased_resets_weights_and_lineage(prism):
    h = contract(prism, [{0, 1, 2}]).rebased()
    assert h.node_weight == {0: 1, 3: 1, 4: 1, 5: 1}
    assert h.lineage_vertex == {0: 0, 3: 3, 4: 4, 5: 5}
