"""Classifier uncertainty measures and pool-based uncertainty sampling."""

from __future__ import annotations

import numpy as np

from .core import QuerySelection, check_probabilities, select_argmax

# clamp before taking logs so exact zeros don't produce -inf
_LOG_CLAMP = 1e-300


def classifier_uncertainty(P) -> np.ndarray:
    """Least-confident utility: 1 - max class probability per row."""
    P = check_probabilities(P)
    return 1.0 - P.max(axis=1)


def classifier_margin(P) -> np.ndarray:
    """1 minus the gap between the two largest class probabilities.

    Oriented so that a smaller margin (more ambiguity) scores higher.
    """
    P = check_probabilities(P)
    if P.shape[1] < 2:
        raise ValueError("margin requires at least 2 classes")
    part = np.partition(P, -2, axis=1)
    return 1.0 - (part[:, -1] - part[:, -2])


def classifier_entropy(P) -> np.ndarray:
    """Shannon entropy of each probability row, natural log."""
    P = check_probabilities(P)
    Pc = np.clip(P, _LOG_CLAMP, 1.0)
    return -np.sum(np.where(P > 0, P * np.log(Pc), 0.0), axis=1)


MEASURES = {
    "least_confident": classifier_uncertainty,
    "margin": classifier_margin,
    "entropy": classifier_entropy,
}


def uncertainty_utility(measure: str):
    """Utility function (learner, pool) -> scores for the named measure."""
    fn = MEASURES[measure]

    def utility(learner, pool):
        return fn(learner.predict_proba(pool))

    return utility


def uncertainty_sampling(learner, pool, n: int = 1, measure: str = "least_confident",
                         selector=select_argmax) -> QuerySelection:
    pool = np.asarray(pool, dtype=float)
    idx = selector(uncertainty_utility(measure)(learner, pool), n)
    return QuerySelection(indices=np.asarray(idx), instances=pool[np.asarray(idx)])
