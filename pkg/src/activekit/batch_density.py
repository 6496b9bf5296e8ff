"""Ranked batch-mode sampling and information-density utility weighting."""

from __future__ import annotations

import numpy as np
from scipy.spatial.distance import cdist

from .core import QuerySelection, check_matrix
from .uncertainty import classifier_uncertainty

SIMILARITY_KINDS = ("euclidean_inverse", "cosine")


def _similarity_matrix(A, B, kind: str) -> np.ndarray:
    A = check_matrix(A, "A")
    B = check_matrix(B, "B")
    if A.shape[1] != B.shape[1]:
        raise ValueError("feature count mismatch")
    if kind == "euclidean_inverse":
        return 1.0 / (1.0 + cdist(A, B))
    if kind == "cosine":
        na = np.linalg.norm(A, axis=1)
        nb = np.linalg.norm(B, axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            sim = (A @ B.T) / np.outer(na, nb)
        sim[~np.isfinite(sim)] = 0.0  # zero-vector convention
        return sim
    raise ValueError(f"unknown similarity kind {kind!r}")


def similarity(a, b, kind: str = "euclidean_inverse") -> float:
    """Pairwise similarity between two instance rows."""
    return float(_similarity_matrix(np.atleast_2d(a), np.atleast_2d(b), kind)[0, 0])


def information_density(pool, kind: str = "euclidean_inverse") -> np.ndarray:
    """Mean similarity of each pool instance to the whole pool (self included)."""
    pool = check_matrix(pool, "pool")
    if pool.shape[0] == 0:
        raise ValueError("pool is empty")
    return _similarity_matrix(pool, pool, kind).mean(axis=1)


def density_weighted_utility(base, density, beta: float) -> np.ndarray:
    """Scale a base utility by density**beta; beta=0 returns the base unchanged."""
    base = np.asarray(base, dtype=float)
    density = np.asarray(density, dtype=float)
    if base.shape != density.shape:
        raise ValueError("base and density lengths differ")
    if beta < 0:
        raise ValueError("beta must be >= 0")
    if beta == 0:
        return base.copy()
    if (density < 0).any() and beta != int(beta):
        raise ValueError("negative density with fractional beta")
    return base * density ** beta


def density_weighted_utility_fn(measure_fn, kind: str = "euclidean_inverse", beta: float = 1.0):
    """Utility (learner, pool) -> measure(pool) weighted by information density."""

    def utility(learner, pool):
        base = measure_fn(learner.predict_proba(pool))
        return density_weighted_utility(base, information_density(pool, kind), beta)

    return utility


def ranked_batch(learner, pool, labeled, n: int, kind: str = "euclidean_inverse") -> QuerySelection:
    """Greedy diversity/uncertainty batch selection.

    At each step, with u unlabeled instances remaining and l labeled so far
    (training data plus picks made within this batch), each candidate scores
    alpha*(1 - max_sim_to_labeled) + (1-alpha)*uncertainty with
    alpha = u/(u+l); the best candidate joins the labeled set and scoring
    repeats until n picks are made.
    """
    pool = check_matrix(pool, "pool")
    if not 1 <= n <= pool.shape[0]:
        raise ValueError(f"n={n} out of range for pool of {pool.shape[0]}")
    uncertainty = classifier_uncertainty(learner.predict_proba(pool))

    labeled = check_matrix(labeled, "labeled") if labeled is not None and len(labeled) else None
    # max similarity from each candidate to the labeled-so-far set
    if labeled is not None:
        phi = _similarity_matrix(pool, labeled, kind).max(axis=1)
        n_labeled = labeled.shape[0]
    else:
        phi = np.zeros(pool.shape[0])
        n_labeled = 0

    remaining = np.ones(pool.shape[0], dtype=bool)
    picks = []
    for _ in range(n):
        u = int(remaining.sum())
        l = n_labeled + len(picks)
        alpha = u / (u + l) if (u + l) else 0.0
        scores = alpha * (1.0 - phi) + (1.0 - alpha) * uncertainty
        # exact score ties fall back to higher uncertainty, then lower index,
        # so an all-tied first step (empty labeled set, alpha=1) still picks
        # the most uncertain candidate
        best = min(np.flatnonzero(remaining),
                   key=lambda i: (-scores[i], -uncertainty[i], i))
        picks.append(int(best))
        remaining[best] = False
        phi = np.maximum(phi, _similarity_matrix(pool, pool[best : best + 1], kind)[:, 0])
    idx = np.asarray(picks)
    return QuerySelection(indices=idx, instances=pool[idx])


def ranked_batch_sampling(learner, pool, n: int = 1, kind: str = "euclidean_inverse") -> QuerySelection:
    return ranked_batch(learner, pool, learner.X_train, n, kind)
