"""Comparison methods: L2 TUCKER2 solvers, vectorized PCA / L1-PCA, and an
alternating L1 heuristic.

``alt_heuristic`` is a simple alternating scheme used as a stand-in for
approximate L1 TUCKER2 solvers such as TPCA-L1; it is not a
reimplementation of any published TPCA-L1 procedure.
"""

import numpy as np

from .arrangement import MAX_EXHAUSTIVE_N, build_candidate_set, check_general_position, iter_exhaustive
from .exceptions import DimensionError
from .linalg import (
    as_matrix,
    as_stack,
    canonical_sign,
    matricize,
    signed_sum,
    stack_to_columns,
    thin_svd,
    top_singular_triplet,
)
from .solvers import (
    BATCH,
    TIE_TOL,
    Rank1Solution,
    choose_solver,
    objective,
    projections,
    sign_pattern,
)


def _dominant_left(A):
    return top_singular_triplet(A).u


def hosvd_rank1(stack):
    """Dominant left singular vectors of the mode-1 and mode-2 unfoldings."""
    stack = as_stack(stack)
    u = _dominant_left(np.concatenate(list(stack), axis=1))
    v = _dominant_left(np.concatenate(list(stack.transpose(0, 2, 1)), axis=1))
    return u, v


def l2_objective(stack, u, v):
    """sum_i (u' X_i v)^2."""
    return float(np.sum(projections(stack, u, v) ** 2))


def _alternate_l2(stack, u, v, max_iters, tol):
    history = [l2_objective(stack, u, v)]
    for _ in range(max_iters):
        # u <- top eigenvector of sum_i (X_i v)(X_i v)', i.e. top left sv of [X_1 v, ..., X_N v]
        u = _dominant_left(np.einsum("ndm,m->dn", stack, v))
        v = _dominant_left(np.einsum("ndm,d->mn", stack, u))
        history.append(l2_objective(stack, u, v))
        if history[-1] - history[-2] < tol:
            break
    return u, v, history


def hooi_rank1(stack, max_iters=100, tol=1e-10, init=None, return_history=False):
    """Rank-1 HOOI: alternating dominant-eigenvector updates of u and v.

    Initialized from :func:`hosvd_rank1` unless ``init=(u, v)`` is given.
    Stops once the L2 objective gains less than ``tol`` in a sweep.
    """
    stack = as_stack(stack)
    u, v = hosvd_rank1(stack) if init is None else (np.asarray(init[0], float), np.asarray(init[1], float))
    u, v, history = _alternate_l2(stack, u, v, max_iters, tol)
    return (u, v, history) if return_history else (u, v)


def glram_init(stack, power_steps=1):
    """Starting pair for GLRAM: e_1-seeded power iteration on sum_i X_i X_i'."""
    stack = as_stack(stack)
    G = np.einsum("ndm,nem->de", stack, stack)
    u = np.zeros(stack.shape[1])
    u[0] = 1.0
    for _ in range(power_steps):
        w = G @ u
        norm = np.linalg.norm(w)
        if norm == 0.0:
            break
        u = w / norm
    u = canonical_sign(u) * u
    v = _dominant_left(np.einsum("ndm,d->mn", stack, u))
    return u, v


def glram_rank1(stack, max_iters=100, tol=1e-10, power_steps=1, return_history=False):
    """Rank-1 GLRAM: the HOOI alternation started from :func:`glram_init`."""
    stack = as_stack(stack)
    u, v = glram_init(stack, power_steps)
    u, v, history = _alternate_l2(stack, u, v, max_iters, tol)
    return (u, v, history) if return_history else (u, v)


def pca_rank1_vectorized(stack, center=False):
    """First principal component q of [vec X_1, ..., vec X_N] (no centering by default)."""
    Y = stack_to_columns(as_stack(stack))
    if center:
        Y = Y - Y.mean(axis=1, keepdims=True)
    return _dominant_left(Y)


def _best_column_norm(X, blocks):
    best, best_b = -np.inf, None
    for B in blocks:
        norms = np.linalg.norm(X @ B.T.astype(float), axis=0)
        k = int(np.argmax(norms))
        if norms[k] > best + TIE_TOL:
            best, best_b = norms[k], B[k]
    return best_b


def l1pca_rank1_exact(X, max_n=MAX_EXHAUSTIVE_N):
    """Exact rank-1 L1-PCA of the columns of ``X`` (D x N).

    Maximizes |X b|_2 over b in {+-1}^N, scanning either the exhaustive
    half-cube or the arrangement candidate set built from the row space of
    X, whichever is smaller.

    Returns
    -------
    u : ndarray
        X b* / |X b*|, the L1 principal component.
    objective : float
        sum_i |u' x_i|, equal to |X b*|.
    """
    X = as_matrix(X, "X")
    N = X.shape[1]
    svd = thin_svd(X)
    if svd.rho == 0:
        u = np.eye(X.shape[0])[0]
        return u, 0.0
    if choose_solver(N, svd.rho) == "polynomial" and check_general_position(svd.W)[0]:
        cands = build_candidate_set(svd.W).candidates
        blocks = [cands[i:i + BATCH] for i in range(0, cands.shape[0], BATCH)]
    else:
        blocks = iter_exhaustive(N, chunk=BATCH, max_n=max_n)
    b = _best_column_norm(X, blocks)
    y = X @ b.astype(float)
    u = y / np.linalg.norm(y)
    u = canonical_sign(u) * u
    return u, float(np.sum(np.abs(X.T @ u)))


def l1pca_rank1_vectorized(stack, max_n=MAX_EXHAUSTIVE_N):
    """L1 principal component of [vec X_1, ..., vec X_N]."""
    return l1pca_rank1_exact(stack_to_columns(as_stack(stack)), max_n=max_n)[0]


def alt_heuristic(stack, init=None, max_iters=100):
    """Alternating L1 heuristic: b <- sgn(u' X_i v), then (u, v) <- top singular pair of sum b_i X_i.

    Runs until a sign vector repeats or ``max_iters`` updates have been made.
    Each half-step cannot decrease the L1 objective, which is recorded in
    ``history`` (one entry per visited (u, v)).
    """
    stack = as_stack(stack)
    if init is None:
        u, v = hosvd_rank1(stack)
    else:
        u, v = np.asarray(init[0], float), np.asarray(init[1], float)
    history = [objective(stack, u, v)]
    seen = set()
    b = sign_pattern(stack, u, v)
    for _ in range(max_iters):
        key = b.tobytes()
        if key in seen:
            break
        seen.add(key)
        _, u, v = top_singular_triplet(signed_sum(stack, b))
        history.append(objective(stack, u, v))
        b = sign_pattern(stack, u, v)
    return Rank1Solution(
        u=u,
        v=v,
        b=b,
        objective=history[-1],
        method="alt-heuristic",
        candidates_evaluated=len(history) - 1,
        history=tuple(history),
    )


def reconstruct_tucker2(stack, u, v):
    """A_i ~ u u' X_i v v'."""
    stack = as_stack(stack)
    p = projections(stack, u, v)
    u = np.asarray(u, float) / np.linalg.norm(u)
    v = np.asarray(v, float) / np.linalg.norm(v)
    return p[:, None, None] * np.outer(u, v)[None]


def reconstruct_pca(stack, q):
    """A_i ~ mat(q q' vec X_i)."""
    stack = as_stack(stack)
    N, D, M = stack.shape
    q = np.asarray(q, float)
    if q.shape != (D * M,):
        raise DimensionError(f"q must have length {D * M}, got {q.shape}")
    q = q / np.linalg.norm(q)
    coef = q @ stack_to_columns(stack)
    return np.stack([matricize(c * q, D, M) for c in coef])


def reconstruct(stack, fit):
    """Reconstruct every slice from a method output.

    ``fit`` is either a PCA-type unit vector q of length D*M, a ``(u, v)``
    pair, or a :class:`Rank1Solution`.
    """
    if isinstance(fit, Rank1Solution):
        return reconstruct_tucker2(stack, fit.u, fit.v)
    if isinstance(fit, tuple) and len(fit) == 2:
        return reconstruct_tucker2(stack, *fit)
    return reconstruct_pca(stack, fit)


__all__ = [
    "alt_heuristic",
    "glram_init",
    "glram_rank1",
    "hooi_rank1",
    "hosvd_rank1",
    "l1pca_rank1_exact",
    "l1pca_rank1_vectorized",
    "l2_objective",
    "pca_rank1_vectorized",
    "reconstruct",
    "reconstruct_pca",
    "reconstruct_tucker2",
]
