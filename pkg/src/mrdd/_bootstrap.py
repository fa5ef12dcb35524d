"""Replicate-keyed nonparametric bootstrap machinery.

Every replicate draws its row resample from a generator seeded by
(seed, stream_tag..., replicate_index), so results are identical regardless
of execution order or worker count. Replicates that raise a DataError are
recorded as NaN rows and counted as failures.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import DataError, InvalidConfig, TooManyFailedReplicates

MIN_REPLICATES = 50
MAX_FAILURE_FRACTION = 0.10

# Stream tags keep the bootstrap draws of different operations disjoint.
DENSITY_TEST_STREAM = 1
BALANCE_TEST_STREAM = 2
BOUNDS_STREAM = 3


def replicate_rng(seed: int, *key: int) -> np.random.Generator:
    """Generator keyed by (seed, *key); stable across schedules and workers."""
    return np.random.default_rng([int(seed)] + [int(k) for k in key])


def check_bootstrap_config(b: int, seed: int) -> None:
    if b < MIN_REPLICATES:
        raise InvalidConfig(f"bootstrap replication count must be >= {MIN_REPLICATES}, got {b}")
    if seed < 0:
        raise InvalidConfig(f"seed must be a nonnegative integer, got {seed}")


def run_replicates(n_rows, b, seed, stream, stat_fn, stat_dim, workers=1):
    """Evaluate ``stat_fn(indices)`` on ``b`` row resamples.

    Parameters
    ----------
    stat_fn : callable taking an index array, returning ``stat_dim`` floats;
        may raise DataError, which marks the replicate failed.

    Returns
    -------
    (values, n_failed) where values is a (b, stat_dim) array with NaN rows
    for failed replicates.
    """
    out = np.empty((b, stat_dim), dtype=float)

    def one(idx_rep):
        rng = replicate_rng(seed, *stream, idx_rep)
        indices = rng.integers(0, n_rows, n_rows)
        try:
            out[idx_rep, :] = stat_fn(indices)
        except DataError:
            out[idx_rep, :] = np.nan

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(one, range(b)))
    else:
        for idx_rep in range(b):
            one(idx_rep)
    n_failed = int(np.count_nonzero(np.isnan(out).any(axis=1)))
    return out, n_failed


def drop_failed(values: np.ndarray, n_failed: int, what: str) -> np.ndarray:
    b = values.shape[0]
    if n_failed > MAX_FAILURE_FRACTION * b:
        raise TooManyFailedReplicates(
            f"{n_failed} of {b} {what} bootstrap replicates failed "
            f"(limit {MAX_FAILURE_FRACTION:.0%})"
        )
    if n_failed == 0:
        return values
    return values[~np.isnan(values).any(axis=1)]
