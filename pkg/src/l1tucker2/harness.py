"""Seeded data generation, outlier corruption and reconstruction-MSE sweeps.

Every realization draws its data from a random stream derived from
``(seed, realization_index)`` alone, so realizations can be run in any
order or in parallel and every method sees byte-identical input.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import baselines, solvers
from .exceptions import CapacityError, ConfigError
from .linalg import as_stack

log = logging.getLogger(__name__)

DATA_STREAM = 0
CORRUPTION_STREAM = 1

TUCKER2_METHODS = ("exhaustive", "polynomial", "auto", "hosvd", "hooi", "glram", "alt")
PCA_METHODS = ("pca", "l1pca")
METHODS = TUCKER2_METHODS + PCA_METHODS
DEFAULT_METHODS = ("exhaustive", "hosvd", "hooi", "glram", "alt", "pca", "l1pca")


@dataclass(frozen=True)
class ExperimentConfig:
    D: int = 20
    M: int = 20
    N: int = 14
    signal_variance: float = 49.0
    noise_variance: float = 1.0
    corrupt_entries: int = 30
    corrupt_matrices: int = 2
    corruption_db_list: tuple = (6.0, 8.0, 10.0, 12.0, 14.0, 16.0, 18.0, 20.0, 22.0)
    realizations: int = 100
    seed: int = 0
    methods: tuple = DEFAULT_METHODS
    center: bool = False

    def __post_init__(self):
        object.__setattr__(self, "corruption_db_list", tuple(float(x) for x in self.corruption_db_list))
        object.__setattr__(self, "methods", tuple(self.methods))
        self.validate()

    def validate(self):
        if min(self.D, self.M, self.N) < 1:
            raise ConfigError("D, M and N must be positive")
        if self.signal_variance < 0 or self.noise_variance < 0:
            raise ConfigError("variances must be nonnegative")
        if not 0 <= self.corrupt_matrices <= self.N:
            raise ConfigError("corrupt_matrices must lie in [0, N]")
        if not 0 <= self.corrupt_entries <= self.D * self.M:
            raise ConfigError("corrupt_entries must lie in [0, D*M]")
        if self.realizations < 1:
            raise ConfigError("realizations must be at least 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            raise ConfigError(f"unknown methods {unknown}; choose from {METHODS}")


class SweepRecord(NamedTuple):
    method: str
    sigma_c_db: float
    mean_mse: float
    realizations: int


def _rng(seed, realization_index, stream):
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(realization_index), stream]))


def generate_dataset(config, realization_index):
    """Draw (clean, noisy) stacks with A_i = b_i u v' and X_i = A_i + N_i.

    u and v are normalized standard Gaussian vectors, b_i ~ N(0, signal_variance)
    and the entries of N_i are N(0, noise_variance).
    """
    rng = _rng(config.seed, realization_index, DATA_STREAM)
    u = rng.standard_normal(config.D)
    v = rng.standard_normal(config.M)
    u /= np.linalg.norm(u)
    v /= np.linalg.norm(v)
    b = np.sqrt(config.signal_variance) * rng.standard_normal(config.N)
    noise = np.sqrt(config.noise_variance) * rng.standard_normal((config.N, config.D, config.M))
    clean = b[:, None, None] * np.outer(u, v)[None]
    return clean, clean + noise


def db_to_variance(db):
    return 0.0 if db == -np.inf else 10.0 ** (db / 10.0)


def corrupt(noisy, config, realization_index, sigma_c_db):
    """Add N(0, sigma_c^2) outliers to ``corrupt_entries`` entries of each of
    ``corrupt_matrices`` randomly chosen slices.

    Positions and the unit-variance draws depend only on (seed,
    realization_index); ``sigma_c_db`` (sigma_c^2 = 10^(dB/10)) only scales
    them. ``-inf`` dB means no corruption.
    """
    noisy = as_stack(noisy)
    N, D, M = noisy.shape
    if config.corrupt_matrices > N:
        raise ConfigError(f"cannot corrupt {config.corrupt_matrices} of {N} matrices")
    if config.corrupt_entries > D * M:
        raise ConfigError(f"cannot corrupt {config.corrupt_entries} of {D * M} entries per matrix")
    out = noisy.copy()
    variance = db_to_variance(sigma_c_db)
    if variance == 0.0 or config.corrupt_matrices == 0 or config.corrupt_entries == 0:
        return out
    rng = _rng(config.seed, realization_index, CORRUPTION_STREAM)
    slices = rng.choice(N, size=config.corrupt_matrices, replace=False)
    scale = np.sqrt(variance)
    for i in slices:
        pos = rng.choice(D * M, size=config.corrupt_entries, replace=False)
        z = rng.standard_normal(config.corrupt_entries)
        rows, cols = np.unravel_index(pos, (D, M))
        out[i, rows, cols] += scale * z
    return out


def mse(clean, reconstructed):
    """Squared reconstruction error sum_i |A_i - A_hat_i|_F^2."""
    clean = np.asarray(clean, dtype=float)
    reconstructed = np.asarray(reconstructed, dtype=float)
    if clean.shape != reconstructed.shape:
        raise ValueError(f"shape mismatch {clean.shape} vs {reconstructed.shape}")
    return float(np.sum((clean - reconstructed) ** 2))


def fit(stack, method, center=False):
    """Run one method; returns a Rank1Solution, a (u, v) pair, or a PCA vector q."""
    if method == "exhaustive":
        return solvers.solve_exhaustive(stack)
    if method == "polynomial":
        return solvers.solve_polynomial(stack)
    if method == "auto":
        return solvers.solve_auto(stack)
    if method == "hosvd":
        return baselines.hosvd_rank1(stack)
    if method == "hooi":
        return baselines.hooi_rank1(stack)
    if method == "glram":
        return baselines.glram_rank1(stack)
    if method in ("alt", "alt-heuristic"):
        return baselines.alt_heuristic(stack)
    if method == "pca":
        return baselines.pca_rank1_vectorized(stack, center=center)
    if method == "l1pca":
        return baselines.l1pca_rank1_vectorized(stack)
    raise ConfigError(f"unknown method {method!r}")


def realization_mse(config, realization_index):
    """MSE of every method at every corruption level for one realization.

    Returns an array of shape (len(corruption_db_list), len(methods)).
    """
    clean, noisy = generate_dataset(config, realization_index)
    out = np.empty((len(config.corruption_db_list), len(config.methods)))
    for j, db in enumerate(config.corruption_db_list):
        X = corrupt(noisy, config, realization_index, db)
        for k, method in enumerate(config.methods):
            try:
                estimate = fit(X, method, center=config.center)
            except CapacityError as exc:
                raise CapacityError(
                    f"method {method!r}, realization {realization_index}, {db} dB: {exc}"
                ) from exc
            out[j, k] = mse(clean, baselines.reconstruct(X, estimate))
    return out


def _realization_block(args):
    config, indices = args
    return np.stack([realization_mse(config, r) for r in indices])


def run_sweep_detailed(config, workers=1, progress=None):
    """Per-realization MSE array of shape (n_db, realizations, n_methods)."""
    R = config.realizations
    if workers <= 1:
        rows = []
        for r in range(R):
            rows.append(realization_mse(config, r))
            if progress:
                progress(r + 1, R)
        per = np.stack(rows)
    else:
        step = max(1, R // (4 * workers))
        blocks = [(config, range(s, min(s + step, R))) for s in range(0, R, step)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            # map preserves submission order, so the reduction below is order-stable
            per = np.concatenate(list(pool.map(_realization_block, blocks)))
    return per.transpose(1, 0, 2)


def summarize(config, per):
    records = []
    for j, db in enumerate(config.corruption_db_list):
        for k, method in enumerate(config.methods):
            total = 0.0
            for value in per[j, :, k]:
                total += float(value)
            records.append(SweepRecord(method, db, total / per.shape[1], per.shape[1]))
    return sorted(records, key=lambda r: (r.method, r.sigma_c_db))


def run_sweep(config, workers=1, progress=None):
    """Mean reconstruction MSE per (method, corruption level), sorted by (method, dB)."""
    return summarize(config, run_sweep_detailed(config, workers, progress))
