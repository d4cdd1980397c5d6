import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from l1tucker2.arrangement import (
    arrangement_bound,
    build_candidate_set,
    build_exhaustive_set,
    canonical_order,
    cell_count,
    check_general_position,
    sign,
)
from l1tucker2.exceptions import CapacityError, GeneralPositionError


def random_orthonormal_rows(rng, rho, N):
    Q, _ = np.linalg.qr(rng.standard_normal((N, rho)))
    return Q.T


def sampled_patterns(W, n, rng):
    """Distinct sgn(W'c) over n Gaussian (direction-uniform) c."""
    C = rng.standard_normal((n, W.shape[0]))
    return np.unique(sign(C @ W), axis=0)


def test_cell_count_fig1():
    assert cell_count(3, 4) == 14


@pytest.mark.parametrize("N", range(1, 12))
def test_cell_count_full_rank_is_power_of_two(N):
    assert cell_count(N, N) == 2**N
    assert cell_count(1, N) == 2


@given(st.integers(1, 40).flatmap(lambda N: st.tuples(st.integers(1, N), st.just(N))))
def test_cell_count_bound(rhoN):
    rho, N = rhoN
    K = cell_count(rho, N)
    assert K <= 2**N
    assert (K == 2**N) == (rho == N)


def test_cell_count_domain():
    with pytest.raises(ValueError):
        cell_count(5, 4)


def test_general_position_ok():
    W = np.array([[1.0, 0.0, 1.0], [0.0, 1.0, 0.0]])
    assert check_general_position(W) == (True, None)


def test_general_position_zero_column():
    W = np.array([[1.0, 0.0, 0.6], [0.0, 0.0, 0.8]])
    assert check_general_position(W) == (False, (1,))


def test_general_position_duplicate_column():
    rng = np.random.default_rng(4)
    W = rng.standard_normal((3, 6))
    W[:, 4] = W[:, 1]
    ok, subset = check_general_position(W)
    assert not ok
    assert np.linalg.matrix_rank(W[:, list(subset)]) < 2
    assert subset == (1, 4)


def test_rho1_candidates():
    W = np.array([[0.3, -1.2, 0.5, -0.1]])
    cs = build_candidate_set(W)
    expected = {tuple(sign(W[0])), tuple(-sign(W[0]))}
    assert {tuple(b) for b in cs} == expected
    assert len(cs) == 2 == cell_count(1, 4)


@pytest.mark.parametrize("seed", range(3))
def test_fig1_arrangement_sampling(seed):
    rng = np.random.default_rng(seed)
    W = random_orthonormal_rows(rng, 3, 4)
    assert check_general_position(W)[0]
    cs = build_candidate_set(W)
    seen = sampled_patterns(W, 10**6, rng)
    assert len(seen) == 14
    assert all(b in cs for b in seen)


def test_full_rank_contains_every_vector():
    rng = np.random.default_rng(9)
    W = random_orthonormal_rows(rng, 3, 3)
    cs = build_candidate_set(W)
    seen = sampled_patterns(W, 200_000, rng)
    assert len(seen) == 8
    assert len(cs) == 8


@pytest.mark.parametrize("rho,N", [(2, 5), (3, 7), (4, 8), (5, 9)])
def test_candidate_superset_and_size(rho, N):
    rng = np.random.default_rng(rho * 100 + N)
    W = random_orthonormal_rows(rng, rho, N)
    cs = build_candidate_set(W)
    assert len(cs) <= arrangement_bound(rho, N)
    assert len(cs) >= cell_count(rho, N)
    rows = {tuple(b) for b in cs}
    assert len(rows) == len(cs)
    for b in sampled_patterns(W, 50_000, rng):
        assert tuple(b) in rows


def test_candidate_order_is_canonical_and_deterministic():
    W = random_orthonormal_rows(np.random.default_rng(2), 3, 6)
    a = build_candidate_set(W).candidates
    b = build_candidate_set(W.copy()).candidates
    assert np.array_equal(a, b)
    assert np.array_equal(a, canonical_order(a))


def test_candidate_set_rejects_degenerate_W():
    W = np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    with pytest.raises(GeneralPositionError):
        build_candidate_set(W)


def test_exhaustive_small():
    assert build_exhaustive_set(1).candidates.tolist() == [[1]]
    assert build_exhaustive_set(2).candidates.tolist() == [[1, 1], [1, -1]]


def test_exhaustive_matches_itertools_order():
    N = 5
    expected = [(1,) + t for t in itertools.product((1, -1), repeat=N - 1)]
    assert [tuple(b) for b in build_exhaustive_set(N)] == expected


def test_exhaustive_paper_size():
    cs = build_exhaustive_set(14)
    assert len(cs) == 8192
    assert np.all(cs.candidates[:, 0] == 1)
    assert len(np.unique(cs.candidates, axis=0)) == 8192


def test_exhaustive_capacity():
    with pytest.raises(CapacityError):
        build_exhaustive_set(31)
    with pytest.raises(CapacityError):
        build_exhaustive_set(6, max_n=5)


def test_arrangement_bound_formula():
    assert arrangement_bound(3, 4) == 8 * comb(4, 2)
