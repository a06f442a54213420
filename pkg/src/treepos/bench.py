"""Wall-clock scaling harness for the Follow computations."""

from __future__ import annotations

import gc
import time
from dataclasses import dataclass

from .expr import linearize, measure, normalize_stars
from .generator import scaling_family
from .positions import follow_naive
from .zpc import follow_all

CSV_HEADER = "n,size,width,t_naive_ns,t_improved_ns"


@dataclass(frozen=True)
class BenchRow:
    n: int
    size: int
    width: int
    t_naive_ns: int
    t_improved_ns: int

    def csv(self) -> str:
        return f"{self.n},{self.size},{self.width},{self.t_naive_ns},{self.t_improved_ns}"


def _time_ns(fn, repeat: int) -> int:
    best = None
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        for _ in range(max(1, repeat)):
            t0 = time.perf_counter_ns()
            fn()
            dt = time.perf_counter_ns() - t0
            best = dt if best is None else min(best, dt)
    finally:
        if was_enabled:
            gc.enable()
    return best


def run_benchmark(sizes: list[int], repeat: int = 3) -> list[BenchRow]:
    """Time the all-pairs naive recursion against the substitution scheme on
    the scaling family; per-measurement best of ``repeat`` runs (the naive
    side runs once per size, it is slow and stable)."""
    rows = []
    for n in sizes:
        _, expr = scaling_family(n)
        lin = linearize(normalize_stars(expr))
        stats = measure(expr)

        def naive_all() -> None:
            for p in lin.positions:
                for k in range(1, lin.arity(p) + 1):
                    follow_naive(lin, p, k)

        t_improved = _time_ns(lambda: follow_all(lin), repeat)
        t_naive = _time_ns(naive_all, 1)
        rows.append(BenchRow(n, stats["size"], stats["width"], t_naive, t_improved))
    return rows


def format_csv(rows: list[BenchRow]) -> str:
    return "\n".join([CSV_HEADER, *(row.csv() for row in rows)]) + "\n"
