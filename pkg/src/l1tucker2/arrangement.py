"""Candidate sign-vector sets for the combinatorial search.

Two sources are provided: the exhaustive half-cube (every b with b_1 = +1)
and the polynomial-size set read off the hyperplane arrangement that the
columns of W cut into R^rho.
"""

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from .exceptions import CapacityError, DegenerateInputError, DimensionError, GeneralPositionError
from .linalg import orthonormal_complement_vector

GENERAL_POSITION_TOL = 1e-9
MAX_EXHAUSTIVE_N = 30


@dataclass(frozen=True)
class CandidateSet:
    """Deduplicated sign vectors, one per row of ``candidates`` (int8, entries +-1)."""

    candidates: np.ndarray
    source: str

    def __len__(self):
        return self.candidates.shape[0]

    def __iter__(self):
        return iter(self.candidates)

    def __contains__(self, b):
        b = np.asarray(b, dtype=np.int8)
        return bool(np.any(np.all(self.candidates == b, axis=1)))


def sign(x, zero_tol=0.0):
    """{+1, -1} sign with entries of magnitude <= ``zero_tol`` mapped to +1."""
    x = np.asarray(x)
    return np.where(x < -zero_tol, -1, 1).astype(np.int8)


def canonical_order(B):
    """Deduplicate rows of a +-1 matrix and sort them lexicographically (+1 before -1)."""
    bits = (np.asarray(B) < 0).astype(np.uint8)
    bits = np.unique(bits, axis=0)
    return (1 - 2 * bits.astype(np.int8)).astype(np.int8)


def cell_count(rho, N):
    """Number of cells cut by N general-position hyperplanes through the origin of R^rho."""
    rho, N = int(rho), int(N)
    if rho < 1 or N < 1:
        raise ValueError("rho and N must be positive")
    if rho > N:
        raise ValueError(f"rho={rho} exceeds N={N}")
    return 2 * sum(comb(N - 1, j) for j in range(rho))


def arrangement_bound(rho, N):
    """Upper bound 2^rho * C(N, rho - 1) on the size of the arrangement candidate set."""
    return 2**rho * comb(N, rho - 1)


def check_general_position(W, tol=GENERAL_POSITION_TOL):
    """Check that every rho - 1 columns of W are linearly independent.

    Returns
    -------
    ok : bool
    subset : tuple of int or None
        The first offending index set (lexicographic order) when ``ok`` is False.
    """
    W = np.atleast_2d(np.asarray(W, dtype=float))
    rho, N = W.shape
    k = rho - 1
    if k == 0:
        return True, None
    if k > N:
        return False, tuple(range(N))
    subsets = itertools.combinations(range(N), k)
    chunk = 8192
    while True:
        block = list(itertools.islice(subsets, chunk))
        if not block:
            return True, None
        idx = np.array(block)
        mats = W[:, idx].transpose(1, 0, 2)  # (len(block), rho, k)
        smallest = np.linalg.svd(mats, compute_uv=False)[:, -1]
        bad = np.flatnonzero(smallest <= tol)
        if bad.size:
            return False, tuple(int(i) for i in idx[bad[0]])


def _completion_pool(k):
    """All 2^k sign vectors of length k, in lexicographic (+1 first) order."""
    if k == 0:
        return np.ones((1, 0), dtype=np.int8)
    codes = np.arange(2**k)[:, None] >> np.arange(k - 1, -1, -1)
    return (1 - 2 * (codes & 1)).astype(np.int8)


def build_candidate_set(W):
    """Sign vectors of all cells of the arrangement defined by the columns of W.

    For every index set I with |I| = rho - 1 the verge direction v spanning
    the intersection of the nullspaces {c : w_i' c = 0}, i in I, is computed;
    the entries outside I are fixed to sgn(W' v) and the entries in I range
    over all 2^(rho-1) patterns. Both v and -v are used, so the result
    contains every cell signature without relying on symmetry of the
    objective.
    """
    W = np.atleast_2d(np.asarray(W, dtype=float))
    rho, N = W.shape
    if rho < 1 or rho > N:
        raise DimensionError(f"W must be rho x N with 1 <= rho <= N, got {W.shape}")
    k = rho - 1
    pool = _completion_pool(k)
    blocks = []
    for I in itertools.combinations(range(N), k):
        I = list(I)
        try:
            v = orthonormal_complement_vector(W[:, I], dim=rho)
        except DegenerateInputError as exc:
            raise GeneralPositionError(
                f"columns {tuple(I)} of W are not in general position", subset=tuple(I)
            ) from exc
        base = sign(W.T @ v)
        for s in (base, -base):
            B = np.repeat(s[None, :], pool.shape[0], axis=0)
            B[:, I] = pool
            blocks.append(B)
    return CandidateSet(canonical_order(np.concatenate(blocks)), "arrangement")


def iter_exhaustive(N, chunk=4096, max_n=MAX_EXHAUSTIVE_N):
    """Yield the exhaustive half-cube {b : b_1 = +1} in lexicographic order, in blocks."""
    N = int(N)
    if N < 1:
        raise ValueError("N must be positive")
    if N > max_n:
        raise CapacityError(f"exhaustive search over N={N} exceeds the bound N <= {max_n}")
    total = 2 ** (N - 1)
    shifts = np.arange(N - 2, -1, -1)
    for start in range(0, total, chunk):
        codes = np.arange(start, min(start + chunk, total))[:, None] >> shifts
        B = np.empty((codes.shape[0], N), dtype=np.int8)
        B[:, 0] = 1
        B[:, 1:] = 1 - 2 * (codes & 1)
        yield B


def build_exhaustive_set(N, max_n=MAX_EXHAUSTIVE_N):
    """All 2^(N-1) sign vectors with first entry +1, in lexicographic order."""
    return CandidateSet(np.concatenate(list(iter_exhaustive(N, max_n=max_n))), "exhaustive-half")
