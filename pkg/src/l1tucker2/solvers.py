"""Exact rank-1 L1-TUCKER2 solvers.

The problem  max_{|u|=|v|=1} sum_i |u' X_i v|  is solved through the
equivalent binary problem  max_b sigma_max(sum_i b_i X_i): the optimal
(u, v) are the dominant singular vectors of the optimal signed sum.
"""

from dataclasses import dataclass, field
from math import comb
from typing import NamedTuple

import numpy as np

from .arrangement import (
    MAX_EXHAUSTIVE_N,
    build_candidate_set,
    check_general_position,
    iter_exhaustive,
    sign,
)
from .exceptions import DimensionError
from .linalg import (
    as_sign_vector,
    as_stack,
    signed_sum,
    sigma_max_batch,
    stack_to_columns,
    thin_svd,
    top_singular_triplet,
)

ZERO_TOL = 1e-12
TIE_TOL = 1e-12
CERTIFICATE_TOL = 1e-8
BATCH = 4096


@dataclass(frozen=True)
class Rank1Solution:
    u: np.ndarray
    v: np.ndarray
    b: np.ndarray
    objective: float
    method: str
    candidates_evaluated: int = 0
    fallback: bool = False
    history: tuple = field(default=(), compare=False)

    def as_dict(self):
        return {
            "method": self.method,
            "objective": self.objective,
            "b": [int(x) for x in self.b],
            "u": self.u.tolist(),
            "v": self.v.tolist(),
            "candidates_evaluated": self.candidates_evaluated,
            "fallback": self.fallback,
        }


class Certificate(NamedTuple):
    ok: bool
    residuals: dict


def _unit_pair(stack, u, v):
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    _, D, M = stack.shape
    if u.shape != (D,) or v.shape != (M,):
        raise DimensionError(f"expected u of length {D} and v of length {M}, got {u.shape}, {v.shape}")
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if abs(nu - 1.0) > 1e-9:
        u = u / nu
    if abs(nv - 1.0) > 1e-9:
        v = v / nv
    return u, v


def projections(stack, u, v):
    """The vector [u' X_1 v, ..., u' X_N v]."""
    stack = as_stack(stack)
    u, v = _unit_pair(stack, u, v)
    return np.einsum("d,ndm,m->n", u, stack, v)


def objective(stack, u, v):
    """L1-TUCKER2 rank-1 metric sum_i |u' X_i v|."""
    return float(np.sum(np.abs(projections(stack, u, v))))


def sign_pattern(stack, u, v):
    """b_i = sgn(u' X_i v), with |u' X_i v| <= 1e-12 mapped to +1."""
    return sign(projections(stack, u, v), ZERO_TOL)


def evaluate_candidates(stack, candidates):
    """sigma_max(sum_i b_i X_i) for every row b of ``candidates``."""
    candidates = np.asarray(candidates)
    N = stack.shape[0]
    out = np.empty(candidates.shape[0])
    for start in range(0, candidates.shape[0], BATCH):
        B = candidates[start:start + BATCH].astype(float)
        mats = np.tensordot(B, stack, axes=(1, 0)) if N else None
        out[start:start + BATCH] = sigma_max_batch(mats)
    return out


def _select(sigmas):
    """Index of the first candidate within TIE_TOL of the maximum."""
    best = sigmas.max()
    return int(np.flatnonzero(sigmas >= best - TIE_TOL)[0])


def _finish(stack, b, method, count, fallback=False):
    sigma, u, v = top_singular_triplet(signed_sum(stack, b))
    return Rank1Solution(
        u=u,
        v=v,
        b=sign_pattern(stack, u, v),
        objective=sigma,
        method=method,
        candidates_evaluated=int(count),
        fallback=fallback,
    )


def solve_exhaustive(stack, max_n=MAX_EXHAUSTIVE_N, method="exhaustive"):
    """Exact solution by scanning all 2^(N-1) sign vectors with b_1 = +1."""
    stack = as_stack(stack)
    N = stack.shape[0]
    blocks = list(iter_exhaustive(N, max_n=max_n))
    sigmas = np.concatenate([evaluate_candidates(stack, B) for B in blocks])
    k = _select(sigmas)
    chunk = blocks[0].shape[0]
    b = blocks[k // chunk][k % chunk]
    return _finish(stack, b, method, sigmas.size)


def solve_candidates(stack, candidates, method):
    """Best sign vector among an explicit candidate list."""
    stack = as_stack(stack)
    candidates = np.asarray(candidates)
    sigmas = evaluate_candidates(stack, candidates)
    return _finish(stack, candidates[_select(sigmas)], method, candidates.shape[0])


def solve_polynomial(stack, max_n=MAX_EXHAUSTIVE_N):
    """Exact solution by searching the cell signatures of the arrangement of W.

    Y = [vec X_1, ..., vec X_N] = Q S W; the optimal b is sgn(W' c) for some
    c, so only the cells of the arrangement cut by the columns of W need
    visiting. When the columns of W are not in general position the search
    falls back to the exhaustive solver and sets ``fallback=True``.
    """
    stack = as_stack(stack)
    N = stack.shape[0]
    svd = thin_svd(stack_to_columns(stack))
    if svd.rho == 0:
        return _finish(stack, np.ones(N, dtype=np.int8), "polynomial", 1)
    ok, _ = check_general_position(svd.W)
    if not ok:
        sol = solve_exhaustive(stack, max_n=max_n, method="polynomial")
        return Rank1Solution(
            sol.u, sol.v, sol.b, sol.objective, "polynomial", sol.candidates_evaluated, fallback=True
        )
    cands = build_candidate_set(svd.W)
    return solve_candidates(stack, cands.candidates, "polynomial")


def estimate_rank(stack, exact_limit=10**6):
    """rank(Y), computed exactly when D*M*N is small, else bounded by min(DM, N)."""
    N, D, M = stack.shape
    if D * M * N <= exact_limit:
        return thin_svd(stack_to_columns(stack)).rho
    return min(D * M, N)


def choose_solver(N, rho):
    """'polynomial' when the arrangement bound is smaller than 2^(N-1), else 'exhaustive'."""
    if rho == 0:
        return "polynomial"
    return "polynomial" if 2**rho * comb(N, rho - 1) < 2 ** (N - 1) else "exhaustive"


def solve_auto(stack, max_n=MAX_EXHAUSTIVE_N):
    """Dispatch to whichever exact solver has the smaller candidate count.

    The returned solution is exactly the dispatched solver's (its ``method``
    field names the solver that ran).
    """
    stack = as_stack(stack)
    choice = choose_solver(stack.shape[0], estimate_rank(stack))
    if choice == "polynomial":
        return solve_polynomial(stack, max_n=max_n)
    return solve_exhaustive(stack, max_n=max_n)


def _relative(a, b):
    return abs(a - b) / max(abs(a), abs(b), np.finfo(float).tiny)


def verify_certificate(stack, sol, tol=CERTIFICATE_TOL):
    """Check the optimality identities of a solution against its stack.

    Residuals (relative unless stated):

    * ``l1``: objective vs sum_i |u' X_i v|
    * ``bilinear``: objective vs u' (sum_i b_i X_i) v
    * ``sigma``: objective vs sigma_max(sum_i b_i X_i)
    * ``signs``: number of entries where b differs from sgn(u' X_i v)
    """
    stack = as_stack(stack)
    b = as_sign_vector(sol.b, stack.shape[0])
    u, v = _unit_pair(stack, sol.u, sol.v)
    A = signed_sum(stack, b)
    residuals = {
        "l1": _relative(sol.objective, objective(stack, u, v)),
        "bilinear": _relative(sol.objective, float(u @ A @ v)),
        "sigma": _relative(sol.objective, top_singular_triplet(A).sigma),
        "signs": int(np.count_nonzero(b != sign_pattern(stack, u, v))),
    }
    ok = (
        residuals["l1"] < tol
        and residuals["bilinear"] < tol
        and residuals["sigma"] < tol
        and residuals["signs"] == 0
    )
    return Certificate(bool(ok), residuals)
