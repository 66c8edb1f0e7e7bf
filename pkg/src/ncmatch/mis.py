"""Maximal independent set by Luby-style randomized rounds."""

from __future__ import annotations

import random
from collections.abc import Sequence


def luby_mis(adjacency: Sequence[Sequence[int]], seed: int = 0,
             max_rounds: int | None = None) -> tuple[list[int], int]:
    """Maximal independent set of the graph on ``0..k-1``.

    Each round every live vertex draws a priority and joins the set if it
    beats all live neighbours; winners and their neighbours leave the graph.
    Anything still live after ``max_rounds`` is finished greedily in index
    order.  Returns the sorted set and the number of rounds used.
    """
    k = len(adjacency)
    rng = random.Random(seed)
    live = set(range(k))
    chosen: list[int] = []
    rounds = 0
    while live and (max_rounds is None or rounds < max_rounds):
        rounds += 1
        prio = {v: (rng.random(), v) for v in sorted(live)}
        winners = [v for v in sorted(live)
                   if all(u not in live or prio[v] < prio[u] for u in adjacency[v])]
        chosen.extend(winners)
        for v in winners:
            live.discard(v)
            live.difference_update(adjacency[v])
    taken = set(chosen)
    for v in sorted(live):
        if not any(u in taken for u in adjacency[v]):
            taken.add(v)
            chosen.append(v)
    chosen.sort()
    assert is_maximal_independent(adjacency, chosen)
    return chosen, rounds


def is_maximal_independent(adjacency: Sequence[Sequence[int]], chosen: Sequence[int]) -> bool:
    inside = set(chosen)
    for v in inside:
        if any(u in inside for u in adjacency[v] if u != v):
            return False
    return all(v in inside or any(u in inside for u in adjacency[v]) for v in range(len(adjacency)))
