"""Self-check suite behind ``l1tucker2 verify``.

Cross-checks the two exact solvers against each other, the L1-PCA search
against brute-force enumeration, and the optimality certificate of every
solution produced along the way.
"""

import itertools
from typing import NamedTuple

import numpy as np

from .baselines import l1pca_rank1_exact
from .solvers import solve_exhaustive, solve_polynomial, verify_certificate


class CheckResult(NamedTuple):
    name: str
    passed: bool
    detail: str


def brute_force_l1pca(X):
    """max over all b in {+-1}^N of |X b|_2, by full enumeration."""
    N = X.shape[1]
    B = np.array(list(itertools.product((1.0, -1.0), repeat=N)))
    return float(np.max(np.linalg.norm(X @ B.T, axis=0)))


def _same_up_to_sign(a, b):
    return np.array_equal(a, b) or np.array_equal(a, -b)


def run_checks(trials=50, seed=0, rtol=1e-9):
    rng = np.random.default_rng(seed)
    failures = {"oracle": 0, "certificate": 0, "l1pca": 0}
    worst = {"oracle": 0.0, "l1pca": 0.0}
    for _ in range(trials):
        D, M = (int(x) for x in rng.integers(1, 4, size=2))
        N = int(rng.integers(3, 10))
        stack = rng.standard_normal((N, D, M))
        ex = solve_exhaustive(stack)
        po = solve_polynomial(stack)
        rel = abs(ex.objective - po.objective) / max(ex.objective, 1e-300)
        worst["oracle"] = max(worst["oracle"], rel)
        if rel > rtol or not _same_up_to_sign(ex.b, po.b):
            failures["oracle"] += 1
        for sol in (ex, po):
            if not verify_certificate(stack, sol).ok:
                failures["certificate"] += 1

        X = rng.standard_normal((int(rng.integers(1, 5)), int(rng.integers(2, 11))))
        _, obj = l1pca_rank1_exact(X)
        ref = brute_force_l1pca(X)
        rel = abs(obj - ref) / max(ref, 1e-300)
        worst["l1pca"] = max(worst["l1pca"], rel)
        if rel > rtol:
            failures["l1pca"] += 1

    return [
        CheckResult(
            "exhaustive-vs-polynomial",
            failures["oracle"] == 0,
            f"{failures['oracle']}/{trials} mismatches, worst relative gap {worst['oracle']:.2e}",
        ),
        CheckResult(
            "certificate",
            failures["certificate"] == 0,
            f"{failures['certificate']}/{2 * trials} certificates failed",
        ),
        CheckResult(
            "l1pca-vs-brute-force",
            failures["l1pca"] == 0,
            f"{failures['l1pca']}/{trials} mismatches, worst relative gap {worst['l1pca']:.2e}",
        ),
    ]
