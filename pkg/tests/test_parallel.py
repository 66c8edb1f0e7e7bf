import threading
import time

from ncmatch.parallel import Config, Context


def test_pmap_keeps_input_order():
    with Context(config=Config(threads=4)) as ctx:
        def slow(x):
            time.sleep(0.001 * (10 - x))
            return x * x
        assert ctx.pmap(slow, range(10)) == [x * x for x in range(10)]


def test_nested_pmap_runs_inline():
    with Context(config=Config(threads=2)) as ctx:
        outer = ctx.pmap(lambda x: (threading.get_ident(), ctx.pmap(lambda y: threading.get_ident(), [0, 1])), [0, 1])
        for ident, inner in outer:
            assert inner == [ident, ident]


def test_serial_context_and_stats():
    ctx = Context()
    assert ctx.pmap(lambda x: x + 1, [1, 2]) == [2, 3]
    ctx.stats.add_iterations(3)
    ctx.stats.see_depth(2)
    ctx.stats.see_depth(1)
    ctx.emit("step", k=1)
    assert ctx.trace == [{"event": "step", "k": 1}]
    s = ctx.stats_dict()
    assert s["iterations"] == 3 and s["depth"] == 2 and s["oracle_calls"] == 0
