"""Reproducible generation of mixed samples of genuine and fake p-values.

Genuine p-values are Uniform(0,1).  A fake p-value is the smaller of two
independent uniforms -- the report of a hidden repeated experiment -- and is
therefore Beta(1,2) distributed.  Fake draws consume exactly two uniforms
each, mirroring that generative story.

Randomness comes from counter-based Philox streams keyed by
(seed, replica_index) through numpy's SeedSequence hash, so every replica's
sequence is a pure function of those two integers no matter how work is
scheduled across processes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .special import DomainError

__all__ = [
    "DEFAULT_SEED",
    "DEFAULT_Q_LEVELS",
    "SimConfig",
    "replica_stream",
    "sample_genuine",
    "sample_fake",
    "sample_pvector",
    "sample_pmatrix",
]

DEFAULT_SEED = 20240101
DEFAULT_Q_LEVELS = (0.005, 0.01, 0.025, 0.05, 0.1, 0.9, 0.95, 0.975, 0.99, 0.995)
DEFAULT_N_SAMPLES = 4999
DEFAULT_N_REPLICAS = 50


@dataclass(frozen=True)
class SimConfig:
    """Descriptor of one simulation experiment.

    n        sample size (number of p-values combined)
    n_f      how many of the n are fake, 0 <= n_f <= n
    N        statistic draws per replica
    R        replicas
    seed     64-bit master seed
    q_list   quantile levels, strictly increasing inside (0, 1)
    """

    n: int
    n_f: int
    N: int = DEFAULT_N_SAMPLES
    R: int = DEFAULT_N_REPLICAS
    seed: int = DEFAULT_SEED
    q_list: tuple = field(default=DEFAULT_Q_LEVELS)

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("sample size n must be >= 1")
        if not (0 <= self.n_f <= self.n):
            raise DomainError("fake count n_f must satisfy 0 <= n_f <= n")
        if self.N < 1 or self.R < 1:
            raise DomainError("N and R must be >= 1")
        qs = tuple(float(q) for q in self.q_list)
        if len(qs) == 0:
            raise DomainError("q_list must be non-empty")
        if any(not (0.0 < q < 1.0) for q in qs):
            raise DomainError("quantile levels must lie strictly inside (0, 1)")
        if any(b <= a for a, b in zip(qs, qs[1:])):
            raise DomainError("quantile levels must be strictly increasing")
        object.__setattr__(self, "q_list", qs)


def replica_stream(seed: int, replica_index: int) -> np.random.Generator:
    """Deterministic substream for one replica.

    Identical (seed, replica_index) always yields the identical sequence,
    independent of thread or process scheduling.
    """
    if seed < 0 or replica_index < 0:
        raise DomainError("seed and replica index must be nonnegative")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((int(seed), int(replica_index)))))


def _open_uniform(stream: np.random.Generator, shape) -> np.ndarray:
    """Uniform draws guaranteed strictly inside (0, 1)."""
    u = stream.random(shape)
    # numpy's random() lives in [0, 1); an exact 0.0 is a probability-zero
    # event that would break the log-based statistics, so redraw it.
    while True:
        bad = (u <= 0.0) | (u >= 1.0)
        if not bad.any():
            return u
        u[bad] = stream.random(int(bad.sum()))


def sample_genuine(stream: np.random.Generator) -> float:
    """One genuine p-value: Uniform(0,1), endpoints excluded."""
    return float(_open_uniform(stream, 1)[0])


def sample_fake(stream: np.random.Generator) -> float:
    """One fake p-value: min of two fresh uniforms, i.e. Beta(1,2)."""
    pair = _open_uniform(stream, 2)
    return float(min(pair[0], pair[1]))


def sample_pvector(n: int, n_f: int, stream: np.random.Generator) -> np.ndarray:
    """One sample of n p-values: n_f fakes first, then n - n_f genuine.

    Every statistic downstream is permutation invariant, so the placement
    is only a convention.
    """
    if not (0 <= n_f <= n):
        raise DomainError("fake count n_f must satisfy 0 <= n_f <= n")
    fakes = _open_uniform(stream, (n_f, 2)).min(axis=1) if n_f else np.empty(0)
    genuine = _open_uniform(stream, n - n_f) if n - n_f else np.empty(0)
    return np.concatenate([fakes, genuine])


def sample_pmatrix(n: int, n_f: int, N: int, stream: np.random.Generator) -> np.ndarray:
    """N samples at once as an (N, n) matrix; the batch form of
    ``sample_pvector`` used by the simulation pipeline."""
    if not (0 <= n_f <= n):
        raise DomainError("fake count n_f must satisfy 0 <= n_f <= n")
    if N < 1:
        raise DomainError("N must be >= 1")
    parts = []
    if n_f:
        parts.append(_open_uniform(stream, (N, n_f, 2)).min(axis=2))
    if n - n_f:
        parts.append(_open_uniform(stream, (N, n - n_f)))
    return np.concatenate(parts, axis=1)
