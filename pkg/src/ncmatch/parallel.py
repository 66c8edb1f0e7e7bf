"""Run configuration, a small thread pool wrapper and statistics.

Parallel sections go through :meth:`Context.pmap`.  Results come back in
input order, so callers merge deterministically no matter how many workers
ran.  A ``pmap`` issued from inside a worker runs serially on that worker,
which keeps the pool from deadlocking on nested sections.
"""

from __future__ import annotations

import threading
from collections.abc import Callable, Iterable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Optional, TypeVar

from .oracle import BruteForceOracle, Oracle

T = TypeVar("T")
R = TypeVar("R")


@dataclass(frozen=True)
class Config:
    threads: int = 1
    mis_seed: int = 0
    walk_budget_scale: float = 1.0
    family_size: Optional[int] = None   # number of weight vectors, default 2*m*s
    batch: int = 8                      # family candidates evaluated per chunk
    weight_cap: Optional[int] = None


@dataclass
class Stats:
    iterations: int = 0
    depth: int = 0
    rounds: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def add_iterations(self, k: int) -> None:
        with self._lock:
            self.iterations += k

    def see_depth(self, d: int) -> None:
        with self._lock:
            self.depth = max(self.depth, d)


class Context:
    """Everything a run shares: oracle, configuration, pool, stats and trace."""

    def __init__(self, oracle: Optional[Oracle] = None, config: Optional[Config] = None) -> None:
        self.oracle = oracle if oracle is not None else BruteForceOracle()
        self.config = config if config is not None else Config()
        self.stats = Stats()
        self.trace: list[dict[str, Any]] = []
        self._trace_lock = threading.Lock()
        self._local = threading.local()
        self._pool: Optional[ThreadPoolExecutor] = None
        if self.config.threads > 1:
            self._pool = ThreadPoolExecutor(max_workers=self.config.threads)

    def close(self) -> None:
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None

    def __enter__(self) -> Context:
        return self

    def __exit__(self, *exc: object) -> None:
        self.close()

    def _run(self, fn: Callable[[T], R], item: T) -> R:
        self._local.inside = True
        try:
            return fn(item)
        finally:
            self._local.inside = False

    def pmap(self, fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
        items = list(items)
        if self._pool is None or len(items) < 2 or getattr(self._local, "inside", False):
            return [fn(x) for x in items]
        futures = [self._pool.submit(self._run, fn, x) for x in items]
        return [f.result() for f in futures]

    def emit(self, event: str, **data: Any) -> None:
        with self._trace_lock:
            self.trace.append({"event": event, **data})

    def stats_dict(self) -> dict[str, int]:
        t = self.oracle.transcript
        return {
            "oracle_calls": t.queries,
            "cache_hits": t.cache_hits,
            "iterations": self.stats.iterations,
            "depth": self.stats.depth,
            "rounds": self.stats.rounds,
        }
