#!/usr/bin/env python3
"""Measure bottom-up evaluation and layout time across tree sizes.

Prints per-size timings plus the linear-fit slope, intercept and R^2 for
each stage. Evaluation and layout are both expected to scale linearly in
the node count.
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from adtrees.domains import DEFAULT_REGISTRY
from adtrees.evaluation import evaluate, init_valuation
from adtrees.layout import layout
from adtrees.model import node_count
from adtrees.randomgen import random_tree


def best_of(runs: int, fn) -> float:
    times = []
    for _ in range(runs):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def linear_fit(sizes, times) -> tuple[float, float, float]:
    xs = np.asarray(sizes, dtype=float)
    ys = np.asarray(times, dtype=float)
    slope, intercept = np.polyfit(xs, ys, 1)
    predicted = slope * xs + intercept
    ss_res = float(((ys - predicted) ** 2).sum())
    ss_tot = float(((ys - ys.mean()) ** 2).sum())
    r_squared = 1.0 - ss_res / ss_tot if ss_tot else 1.0
    return slope, intercept, r_squared


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+",
                        default=[1000, 2000, 4000, 8000, 16000])
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    domain = DEFAULT_REGISTRY.get("min-cost")
    eval_times = []
    layout_times = []
    print(f"{'nodes':>8} {'evaluate [ms]':>14} {'layout [ms]':>12}")
    for size in args.sizes:
        tree = random_tree(rng, size)
        assert node_count(tree) == size
        valuation = init_valuation(tree, domain)
        t_eval = best_of(args.repeats, lambda: evaluate(tree, domain, valuation))
        t_layout = best_of(args.repeats, lambda: layout(tree))
        eval_times.append(t_eval)
        layout_times.append(t_layout)
        print(f"{size:>8} {t_eval * 1e3:>14.2f} {t_layout * 1e3:>12.2f}")

    for name, times in (("evaluate", eval_times), ("layout", layout_times)):
        slope, intercept, r_squared = linear_fit(args.sizes, times)
        print(f"{name}: {slope * 1e6:.3f} us/node + {intercept * 1e3:.3f} ms, R^2 = {r_squared:.4f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
