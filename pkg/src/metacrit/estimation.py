"""Monte Carlo quantile estimation pipeline.

Per replica: draw N statistic values, sort them and read off the
order-statistic plug-in estimate t_{floor(q(N+1)):N} for every requested
level q.  Across replicas: average the R per-replica estimates and attach
the standard error sqrt(sum (t_i - mean)^2 / (R(R-1))), from which a normal
confidence interval follows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .methods import MethodSpec, evaluate_batch
from .sampling import SimConfig, replica_stream, sample_pmatrix
from .special import DomainError, normal_inv_cdf

__all__ = [
    "QuantileEstimate",
    "quantile_index",
    "order_stat_quantile",
    "run_replica",
    "aggregate",
    "simulate_quantiles",
    "confidence_interval",
]

EXACT = "exact"
SIMULATED = "simulated"

# Absorbs the binary representation error of decimal q levels: 0.99 * 5000
# evaluates to 4949.9999999999995, whose mathematical value is 4950.
_INDEX_GUARD = 1e-7


@dataclass(frozen=True)
class QuantileEstimate:
    """One estimated (or exact) quantile.

    ``stderr`` is None when the value is exact or when R = 1 leaves the
    standard error unavailable.
    """

    q: float
    estimate: float
    stderr: float | None
    replicas: int
    provenance: str = SIMULATED


def quantile_index(N: int, q: float) -> int:
    """1-based order-statistic index floor(q(N+1)), clamped to 1..N."""
    if N < 1:
        raise DomainError("sample size must be >= 1")
    if not (0.0 < q < 1.0):
        raise DomainError("quantile level must lie strictly inside (0, 1)")
    idx = int(math.floor(q * (N + 1) + _INDEX_GUARD))
    return min(max(idx, 1), N)


def order_stat_quantile(sorted_sample, q: float) -> float:
    """Plug-in quantile: the floor(q(N+1))-th smallest sample value."""
    arr = np.asarray(sorted_sample, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise DomainError("sample must be a non-empty vector")
    return float(arr[quantile_index(arr.size, q) - 1])


def run_replica(spec: MethodSpec, cfg: SimConfig, replica_index: int) -> np.ndarray:
    """One replica's quantile estimates, one per level in cfg.q_list."""
    if not (0 <= replica_index < cfg.R):
        raise DomainError("replica index outside 0..R-1")
    stream = replica_stream(cfg.seed, replica_index)
    pmat = sample_pmatrix(cfg.n, cfg.n_f, cfg.N, stream)
    stats = np.sort(evaluate_batch(spec, pmat))
    idx = np.array([quantile_index(cfg.N, q) - 1 for q in cfg.q_list])
    return stats[idx]


def aggregate(replica_values, q: float) -> QuantileEstimate:
    """Average one quantile's per-replica estimates and attach the standard
    error of the mean (None when R = 1)."""
    vals = np.asarray(replica_values, dtype=float)
    if vals.ndim != 1 or vals.size == 0:
        raise DomainError("need at least one replica estimate")
    if not np.all(np.isfinite(vals)):
        raise DomainError("replica estimates must be finite")
    R = vals.size
    mean = float(vals.mean())
    if R == 1:
        return QuantileEstimate(q=q, estimate=mean, stderr=None, replicas=1)
    stderr = float(math.sqrt(np.sum((vals - mean) ** 2) / (R * (R - 1))))
    return QuantileEstimate(q=q, estimate=mean, stderr=stderr, replicas=R)


def simulate_quantiles(spec: MethodSpec, cfg: SimConfig) -> list[QuantileEstimate]:
    """Full pipeline for one (method, n, n_f) cell: R independent replicas,
    aggregated per quantile level."""
    rows = np.empty((cfg.R, len(cfg.q_list)))
    for r in range(cfg.R):
        rows[r] = run_replica(spec, cfg, r)
    return [aggregate(rows[:, j], q) for j, q in enumerate(cfg.q_list)]


def confidence_interval(est: QuantileEstimate, alpha: float) -> tuple[float, float]:
    """Central-limit (1 - alpha) confidence interval for the quantile.

    Exact values and R = 1 estimates yield the degenerate interval
    (estimate, estimate).
    """
    if not (0.0 < alpha < 1.0):
        raise DomainError("alpha must lie strictly inside (0, 1)")
    if est.stderr is None or est.stderr == 0.0:
        return (est.estimate, est.estimate)
    z = normal_inv_cdf(1.0 - alpha / 2.0)
    half = z * est.stderr
    return (est.estimate - half, est.estimate + half)
