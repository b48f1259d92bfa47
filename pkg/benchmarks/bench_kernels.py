#!/usr/bin/env python3
"""Benchmark the compiled kernel backend against the pure NumPy fallback.

Times the three hot kernels in isolation and a full default experiment
(707 episodes, both arms) under each backend.

    python3 benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from volteq import kernels
from volteq.config import parse_config_text
from volteq.sim import run_experiment


def bench(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def kernel_benches(impl, rng):
    serving = rng.uniform(-90.0, -20.0, 10)
    denom = np.ascontiguousarray(rng.uniform(1e-9, 1e-3, 10))
    deltas = rng.choice(np.array([-3, -1, 0, 1, 3], dtype=np.int8), size=(50_000, 20))
    deltas = np.ascontiguousarray(deltas)
    q = np.zeros((3, 5))

    def sinr():
        for i in range(20_000):
            impl.shifted_effective_sinr_db(serving, denom, 13.0 + (i % 20))

    def walk():
        impl.clamped_power_walk_max(13.0, 33.0, deltas)

    def qup():
        for i in range(100_000):
            impl.q_update(q, i % 3, i % 5, 1.0, (i + 1) % 3, 0.001, 0.95)

    return {
        "shifted_effective_sinr_db x20k": sinr,
        "clamped_power_walk_max 50k x 20": walk,
        "q_update x100k": qup,
    }


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    backends = kernels.available_backends()
    if "compiled" not in backends:
        print("note: compiled backend unavailable, benchmarking pure only")

    rng = np.random.default_rng(0)
    rows = []
    for name in backends:
        impl = kernels.get_backend(name)
        for label, fn in kernel_benches(impl, rng).items():
            rows.append((name, label, bench(fn, args.repeats)))

    cfg = parse_config_text("")
    original = kernels.backend()
    try:
        for name in backends:
            kernels.set_backend(name)

            def full_run():
                for arm in ("fpa", "qlearn"):
                    run_experiment(cfg, arm)

            rows.append((name, "full run (707 episodes, both arms)",
                         bench(full_run, args.repeats)))
    finally:
        kernels.set_backend(original)

    width = max(len(r[1]) for r in rows)
    print(f"{'backend':9} {'benchmark':{width}} {'best (s)':>10}")
    for name, label, secs in rows:
        print(f"{name:9} {label:{width}} {secs:10.4f}")

    if len(backends) == 2:
        for label in {r[1] for r in rows}:
            c = next(r[2] for r in rows if r[0] == "compiled" and r[1] == label)
            p = next(r[2] for r in rows if r[0] == "pure" and r[1] == label)
            print(f"speedup {p / c:5.1f}x  {label}")


if __name__ == "__main__":
    main()
