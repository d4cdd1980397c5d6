import dataclasses

import numpy as np
import pytest

from l1tucker2.exceptions import ConfigError
from l1tucker2.harness import (
    ExperimentConfig,
    corrupt,
    generate_dataset,
    mse,
    realization_mse,
    run_sweep,
)
from l1tucker2.linalg import stack_to_columns


@pytest.fixture
def small():
    return ExperimentConfig(D=4, M=3, N=6, corrupt_entries=3, corrupt_matrices=2, realizations=2, seed=7)


class TestGenerate:
    def test_deterministic(self, small):
        a = generate_dataset(small, 3)
        b = generate_dataset(small, 3)
        assert all(np.array_equal(x, y) for x, y in zip(a, b))
        assert not np.array_equal(a[1], generate_dataset(small, 4)[1])

    def test_noiseless_is_rank_one(self, small):
        clean, noisy = generate_dataset(dataclasses.replace(small, noise_variance=0.0), 0)
        assert np.array_equal(clean, noisy)
        assert np.linalg.matrix_rank(stack_to_columns(noisy)) == 1

    def test_zero_signal(self, small):
        clean, _ = generate_dataset(dataclasses.replace(small, signal_variance=0.0), 0)
        assert not np.any(clean)

    def test_signal_variance(self):
        cfg = ExperimentConfig(noise_variance=0.0, realizations=1)
        # |A_i|_F = |b_i| since u, v are unit vectors
        energy = [np.sum(generate_dataset(cfg, r)[0] ** 2, axis=(1, 2)) for r in range(10_000)]
        assert np.mean(energy) == pytest.approx(49.0, rel=0.05)


class TestCorrupt:
    def test_paper_counts(self):
        cfg = ExperimentConfig(realizations=1)
        _, noisy = generate_dataset(cfg, 0)
        out = corrupt(noisy, cfg, 0, 22.0)
        changed = out != noisy
        assert changed.sum() == 60
        assert np.count_nonzero(changed.any(axis=(1, 2))) == 2
        assert set(changed.sum(axis=(1, 2))) == {0, 30}

    def test_no_corruption_cases(self, small):
        _, noisy = generate_dataset(small, 0)
        assert np.array_equal(corrupt(noisy, small, 0, -np.inf), noisy)
        assert np.array_equal(corrupt(noisy, dataclasses.replace(small, corrupt_matrices=0), 0, 20.0), noisy)

    def test_deterministic_and_scaled(self, small):
        _, noisy = generate_dataset(small, 1)
        a = corrupt(noisy, small, 1, 10.0)
        assert np.array_equal(a, corrupt(noisy, small, 1, 10.0))
        b = corrupt(noisy, small, 1, 20.0)
        np.testing.assert_allclose(b - noisy, np.sqrt(10.0) * (a - noisy), rtol=1e-12)

    def test_rejects_too_many_entries(self, small):
        with pytest.raises(ConfigError):
            corrupt(np.zeros((6, 2, 1)), small, 0, 10.0)


class TestMSE:
    def test_values(self):
        A = np.random.default_rng(0).standard_normal((3, 2, 2))
        assert mse(A, A) == 0.0
        assert mse(A, np.zeros_like(A)) == pytest.approx(np.sum(A**2))
        assert mse([[[2.0]]], [[[0.5]]]) == 2.25

    def test_permutation_equivariant(self):
        rng = np.random.default_rng(1)
        A, B = rng.standard_normal((2, 5, 2, 3))
        p = rng.permutation(5)
        assert mse(A[p], B[p]) == pytest.approx(mse(A, B), rel=1e-14)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            mse(np.zeros((2, 2, 2)), np.zeros((2, 2, 3)))


class TestConfig:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"corrupt_matrices": 15},
            {"corrupt_entries": 401},
            {"realizations": 0},
            {"methods": ("nope",)},
            {"noise_variance": -1.0},
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ConfigError):
            ExperimentConfig(**kwargs)


class TestSweep:
    def test_single_record(self, small):
        cfg = dataclasses.replace(small, methods=("exhaustive",), realizations=1, corruption_db_list=(6.0,))
        (rec,) = run_sweep(cfg)
        assert rec.method == "exhaustive" and rec.sigma_c_db == 6.0 and rec.realizations == 1
        assert rec.mean_mse >= 0

    def test_noiseless_exact(self, small):
        cfg = dataclasses.replace(
            small, noise_variance=0.0, corrupt_matrices=0, methods=("exhaustive",), corruption_db_list=(6.0, 20.0)
        )
        assert all(r.mean_mse < 1e-18 for r in run_sweep(cfg))

    def test_sorted_and_reproducible(self, small):
        cfg = dataclasses.replace(small, methods=("pca", "alt", "exhaustive"), corruption_db_list=(20.0, 6.0))
        recs = run_sweep(cfg)
        keys = [(r.method, r.sigma_c_db) for r in recs]
        assert keys == sorted(keys)
        assert recs == run_sweep(cfg)

    def test_paired_inputs(self, small, monkeypatch):
        seen = {}
        from l1tucker2 import harness

        real_fit = harness.fit

        def spy(stack, method, center=False):
            seen.setdefault(method, []).append(stack.tobytes())
            return real_fit(stack, method, center)

        monkeypatch.setattr(harness, "fit", spy)
        cfg = dataclasses.replace(small, methods=("exhaustive", "hooi", "pca"))
        realization_mse(cfg, 0)
        assert seen["exhaustive"] == seen["hooi"] == seen["pca"]

    def test_parallel_matches_serial(self, small):
        cfg = dataclasses.replace(small, methods=("exhaustive", "hosvd"), realizations=4)
        assert run_sweep(cfg, workers=2) == run_sweep(cfg)
