"""Monte Carlo estimator of the full-connectivity probability.

Each trial samples N nodes uniformly in the domain, links every pair
independently with probability H(distance), and decides connectivity of
the resulting graph.  Trials are fully determined by (seed, trial_index):
random numbers come from a per-trial generator seeded with that pair, so
serial, reordered, and parallel execution all produce identical aggregates.

The pair loop runs in a compiled Cython kernel when the extension built,
with a numpy fallback otherwise; both consume the same random stream and
give bit-identical outcomes.  Set PRISMNET_BACKEND=python to force the
fallback.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import HARD_DISK, MIMO_MRC_2X2, RAYLEIGH, ConnectivityModel
from .geometry import Domain

if os.environ.get("PRISMNET_BACKEND") == "python":
    from . import _kernel_py as _kernel
else:
    try:
        from . import _kernel  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernel_py as _kernel

BACKEND = _kernel.BACKEND

_FAMILY_CODE = {MIMO_MRC_2X2: 0, RAYLEIGH: 1, HARD_DISK: 2}

DEFAULT_SEED = 20140904


class SimulationError(ValueError):
    """Invalid simulation configuration."""


@dataclass(frozen=True)
class SimConfig:
    domain: Domain
    model: ConnectivityModel
    trials: int
    seed: int = DEFAULT_SEED
    rho: float | None = None
    n_nodes: int | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise SimulationError("need at least one trial")
        if (self.rho is None) == (self.n_nodes is None):
            raise SimulationError("give exactly one of rho or n_nodes")
        if self.rho is not None and self.rho <= 0:
            raise SimulationError("density must be positive")
        if self.n == 0:
            raise SimulationError("need at least one node")

    @property
    def n(self) -> int:
        """Node count: explicit N, or round-half-down of rho * V."""
        if self.n_nodes is not None:
            return self.n_nodes
        return int(np.ceil(self.rho * self.domain.volume - 0.5))

    @property
    def density(self) -> float:
        return self.rho if self.rho is not None else self.n / self.domain.volume


@dataclass(frozen=True)
class TrialOutcome:
    connected: bool
    component_count: int
    min_degree: int

    def __post_init__(self):
        # connected => single component => no isolated node (for N >= 2).
        assert self.connected == (self.component_count == 1)


@dataclass(frozen=True)
class SimResult:
    domain_spec: dict
    model_family: str
    rho: float
    n: int
    n_trials: int
    fc_count: int
    min_deg_ge1_count: int
    seed: int
    wall_time: float = field(compare=False)

    @property
    def p_fc_hat(self) -> float:
        return self.fc_count / self.n_trials

    @property
    def p_out_hat(self) -> float:
        return 1.0 - self.p_fc_hat

    @property
    def p_min_deg_hat(self) -> float:
        return self.min_deg_ge1_count / self.n_trials

    @property
    def std_err(self) -> float:
        p = self.p_fc_hat
        return float(np.sqrt(p * (1.0 - p) / self.n_trials))

    def to_dict(self) -> dict:
        return {
            "domain": self.domain_spec,
            "model_family": self.model_family,
            "rho": self.rho,
            "n": self.n,
            "trials": self.n_trials,
            "fc_count": self.fc_count,
            "min_deg_ge1_count": self.min_deg_ge1_count,
            "p_fc_hat": self.p_fc_hat,
            "p_out_hat": self.p_out_hat,
            "p_min_deg_hat": self.p_min_deg_hat,
            "std_err": self.std_err,
            "seed": self.seed,
            "wall_time_s": self.wall_time,
        }


def trial_rng(seed: int, trial_index: int) -> np.random.Generator:
    """Derive the trial's own random stream from (seed, trial_index)."""
    return np.random.default_rng(np.random.SeedSequence([seed, trial_index]))


def run_trial(config: SimConfig, trial_index: int) -> TrialOutcome:
    n = config.n
    rng = trial_rng(config.seed, trial_index)
    pos = np.ascontiguousarray(config.domain.sample(n, rng))
    u = rng.random(n * (n - 1) // 2)
    model = config.model
    ncomp, mindeg = _kernel.pair_graph_stats(
        pos, u, _FAMILY_CODE[model.family], model.beta, model.eta, model.r0
    )
    return TrialOutcome(connected=ncomp == 1, component_count=ncomp, min_degree=mindeg)


def is_connected(adjacency) -> tuple[bool, int, int]:
    """Exact connectivity of a symmetric 0/1 adjacency matrix.

    Returns (connected, component_count, min_degree) via union-find.
    """
    adj = np.asarray(adjacency, dtype=bool)
    n = adj.shape[0]
    if adj.shape != (n, n):
        raise ValueError("adjacency must be square")
    if not np.array_equal(adj, adj.T) or np.any(np.diag(adj)):
        raise ValueError("adjacency must be symmetric with an empty diagonal")
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n - 1):
        for j in range(i + 1, n):
            if adj[i, j]:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    ncomp = sum(1 for i in range(n) if find(i) == i)
    min_degree = int(adj.sum(axis=1).min()) if n else 0
    return ncomp == 1, ncomp, min_degree


def _count_range(config: SimConfig, start: int, stop: int) -> tuple[int, int]:
    fc = 0
    deg_ok = 0
    for t in range(start, stop):
        outcome = run_trial(config, t)
        if outcome.connected:
            fc += 1
        if outcome.min_degree >= 1 or config.n == 1:
            deg_ok += 1
    return fc, deg_ok


def estimate(config: SimConfig, workers: int = 1) -> SimResult:
    """Aggregate `config.trials` independent trials into a SimResult."""
    t0 = time.perf_counter()
    if workers > 1:
        chunks = np.linspace(0, config.trials, workers + 1, dtype=int)
        fc = deg_ok = 0
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_count_range, config, int(a), int(b))
                for a, b in zip(chunks[:-1], chunks[1:])
            ]
            for fut in futures:
                f, d = fut.result()
                fc += f
                deg_ok += d
    else:
        fc, deg_ok = _count_range(config, 0, config.trials)
    wall = time.perf_counter() - t0
    return SimResult(
        domain_spec=config.domain.to_spec(),
        model_family=config.model.family,
        rho=config.density,
        n=config.n,
        n_trials=config.trials,
        fc_count=fc,
        min_deg_ge1_count=deg_ok,
        seed=config.seed,
        wall_time=wall,
    )


def sweep(
    domain: Domain,
    model: ConnectivityModel,
    rho_values,
    trials: int,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
) -> list[SimResult]:
    """One estimate per density; each density gets its own seed offset."""
    rho_values = list(rho_values)
    if any(b <= a for a, b in zip(rho_values, rho_values[1:])):
        raise SimulationError("density sweep must be strictly increasing")
    results = []
    for i, rho in enumerate(rho_values):
        cfg = SimConfig(domain=domain, model=model, trials=trials, seed=seed + i, rho=float(rho))
        results.append(estimate(cfg, workers=workers))
    return results
