"""Dense linear-algebra primitives.

A matrix stack is represented throughout as a float array of shape
``(N, D, M)``: slice ``stack[i]`` is the ``D x M`` matrix X_i.
"""

from typing import NamedTuple

import numpy as np

from .exceptions import DegenerateInputError, DimensionError, InputError

RANK_TOL = 1e-10
COMPLEMENT_TOL = 1e-8


class SingularTriplet(NamedTuple):
    sigma: float
    u: np.ndarray
    v: np.ndarray


class ThinSVD(NamedTuple):
    Q: np.ndarray
    S: np.ndarray
    W: np.ndarray
    rho: int


def as_matrix(X, name="matrix"):
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise DimensionError(f"{name} must be a non-empty 2-D array, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise InputError(f"{name} has non-finite entries")
    return X


def as_stack(stack):
    """Validate and convert ``stack`` to a float array of shape (N, D, M).

    Accepts a 3-D array or a sequence of equally shaped 2-D arrays.
    """
    try:
        S = np.asarray(stack, dtype=float)
    except ValueError as exc:
        raise DimensionError("slices must share the same D x M shape") from exc
    if S.ndim != 3 or min(S.shape) < 1:
        raise DimensionError(f"stack must have shape (N, D, M) with N, D, M >= 1, got {S.shape}")
    if not np.all(np.isfinite(S)):
        raise InputError("stack has non-finite entries")
    return S


def as_sign_vector(b, n=None):
    b = np.asarray(b)
    if b.ndim != 1:
        raise DimensionError("sign vector must be 1-D")
    if n is not None and b.shape[0] != n:
        raise DimensionError(f"sign vector has length {b.shape[0]}, expected {n}")
    if not np.all((b == 1) | (b == -1)):
        raise InputError("sign vector entries must be +1 or -1")
    return b.astype(np.int8)


def vectorize(X):
    """Column-major vectorization, so that ``u @ X @ v == vectorize(X) @ kron(v, u)``."""
    return np.asarray(X).reshape(-1, order="F")


def matricize(x, D, M):
    """Inverse of :func:`vectorize` for a ``D x M`` matrix."""
    x = np.asarray(x)
    if x.size != D * M:
        raise DimensionError(f"cannot reshape vector of length {x.size} into {D}x{M}")
    return x.reshape((D, M), order="F")


def stack_to_columns(stack):
    """Return Y = [vec(X_1), ..., vec(X_N)] of shape (D*M, N)."""
    stack = np.asarray(stack)
    N = stack.shape[0]
    # transposing each slice then C-flattening gives column-major order
    return stack.transpose(0, 2, 1).reshape(N, -1).T


def signed_sum(stack, b):
    """Sum_i b_i X_i, without forming the concatenation or a Kronecker product."""
    stack = np.asarray(stack, dtype=float)
    b = np.asarray(b)
    if b.ndim != 1 or b.shape[0] != stack.shape[0]:
        raise DimensionError(
            f"sign vector of length {b.shape[-1] if b.ndim else 0} does not match N={stack.shape[0]}"
        )
    return np.tensordot(b.astype(float), stack, axes=(0, 0))


def canonical_sign(u):
    """Return +1 or -1 so that the largest-magnitude entry of ``sign * u`` is positive.

    Ties in magnitude resolve to the lowest index (``np.argmax`` semantics).
    """
    k = int(np.argmax(np.abs(u)))
    return -1.0 if u[k] < 0 else 1.0


def top_singular_triplet(A):
    """Dominant singular value and sign-canonicalized unit singular vectors of ``A``.

    The all-zero matrix yields ``sigma = 0`` with ``u = e_1`` and ``v = e_1``.
    """
    A = as_matrix(A)
    D, M = A.shape
    if not np.any(A):
        return SingularTriplet(0.0, np.eye(D)[0], np.eye(M)[0])
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    u, v = U[:, 0], Vt[0]
    sign = canonical_sign(u)
    u = sign * u
    v = sign * v
    return SingularTriplet(float(s[0]), u / np.linalg.norm(u), v / np.linalg.norm(v))


def sigma_max_batch(mats):
    """Largest singular value of every matrix in a (K, D, M) batch."""
    mats = np.asarray(mats, dtype=float)
    if mats.shape[1] == 1 or mats.shape[2] == 1:
        return np.linalg.norm(mats.reshape(mats.shape[0], -1), axis=1)
    return np.linalg.svd(mats, compute_uv=False)[:, 0]


def thin_svd(Y, rank_tol=RANK_TOL):
    """Rank-revealing thin SVD ``Y = Q @ diag(S) @ W``.

    Singular values at or below ``rank_tol`` times the largest are dropped.
    For an all-zero ``Y`` the rank is reported as 0 with empty factors.
    """
    Y = as_matrix(Y, "Y")
    U, s, Vt = np.linalg.svd(Y, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return ThinSVD(U[:, :0], s[:0], Vt[:0], 0)
    rho = int(np.count_nonzero(s > rank_tol * s[0]))
    return ThinSVD(U[:, :rho], s[:rho], Vt[:rho], rho)


def orthonormal_complement_vector(columns, dim=None):
    """Unit vector orthogonal to ``dim - 1`` linearly independent vectors in R^dim.

    Parameters
    ----------
    columns : array_like, shape (dim, dim - 1) or a list of dim-length vectors
    dim : int, optional
        Ambient dimension; required only when ``columns`` is empty.

    The direction is found by orthogonalizing e_1, e_2, ... in turn against
    the span of ``columns`` and normalizing the first residual whose norm
    exceeds 1e-8, which makes the result deterministic.
    """
    if isinstance(columns, np.ndarray) and columns.ndim == 2:
        C = np.asarray(columns, dtype=float)
    else:
        cols = [np.asarray(c, dtype=float) for c in columns]
        if not cols:
            if dim is None:
                raise DimensionError("dim is required when no columns are given")
            C = np.zeros((dim, 0))
        else:
            C = np.column_stack(cols)
    dim = C.shape[0] if dim is None else dim
    if C.shape[0] != dim or C.shape[1] != dim - 1:
        raise DimensionError(f"expected {dim - 1} vectors of length {dim}, got shape {C.shape}")

    # modified Gram-Schmidt with one reorthogonalization pass
    basis = []
    for j in range(C.shape[1]):
        w = C[:, j].copy()
        norm0 = np.linalg.norm(w)
        for _ in range(2):
            for q in basis:
                w -= (q @ w) * q
        norm = np.linalg.norm(w)
        if norm0 == 0.0 or norm <= COMPLEMENT_TOL * norm0:
            raise DegenerateInputError(f"column {j} is linearly dependent on the preceding ones")
        basis.append(w / norm)

    for k in range(dim):
        r = np.zeros(dim)
        r[k] = 1.0
        for _ in range(2):
            for q in basis:
                r -= (q @ r) * q
        norm = np.linalg.norm(r)
        if norm > COMPLEMENT_TOL:
            return r / norm
    raise DegenerateInputError("no complement direction found")
