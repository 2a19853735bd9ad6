"""Throughput comparison of the compiled and pure-Python trial kernels.

Runs the same deterministic trial workload through both backends and
reports trials/second plus the speedup, after asserting that the two
produce identical outcomes.

Usage: python benchmarks/bench_backends.py [--trials 200] [--rho 1.0]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from prismnet import _kernel_py
from prismnet.channel import mimo_mrc_2x2
from prismnet.geometry import build_house
from prismnet.simulator import _FAMILY_CODE, SimConfig, trial_rng

try:
    from prismnet import _kernel as _kernel_cy
except ImportError:
    _kernel_cy = None


def run(kernel, config: SimConfig, trials: int):
    outcomes = []
    t0 = time.perf_counter()
    for t in range(trials):
        rng = trial_rng(config.seed, t)
        pos = np.ascontiguousarray(config.domain.sample(config.n, rng))
        u = rng.random(config.n * (config.n - 1) // 2)
        m = config.model
        outcomes.append(
            kernel.pair_graph_stats(pos, u, _FAMILY_CODE[m.family], m.beta, m.eta, m.r0)
        )
    return outcomes, time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--rho", type=float, default=1.0)
    ap.add_argument("--side", type=float, default=5.0)
    args = ap.parse_args()

    config = SimConfig(
        domain=build_house(args.side), model=mimo_mrc_2x2(1.0), trials=args.trials, rho=args.rho
    )
    print(f"house L={args.side}, rho={args.rho} -> N={config.n}, {args.trials} trials")

    out_py, t_py = run(_kernel_py, config, args.trials)
    print(f"python : {args.trials / t_py:8.1f} trials/s  ({t_py:.3f} s)")

    if _kernel_cy is None:
        print("cython : extension not built")
        return
    out_cy, t_cy = run(_kernel_cy, config, args.trials)
    assert out_py == out_cy, "backends disagree"
    print(f"cython : {args.trials / t_cy:8.1f} trials/s  ({t_cy:.3f} s)")
    print(f"speedup: {t_py / t_cy:.1f}x (identical outcomes on all trials)")


if __name__ == "__main__":
    main()
