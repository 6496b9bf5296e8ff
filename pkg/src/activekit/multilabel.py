"""Multilabel query strategies over one-vs-rest decision values and
per-label probabilities.

All strategies return a utility per pool instance, oriented higher = query
first. Hard predictions use the convention d_j >= 0 means label j relevant.
"""

from __future__ import annotations

import numpy as np

from .core import ContractError, check_matrix


def _decisions(learner, pool) -> np.ndarray:
    if not getattr(learner.estimator, "decision_scores", False):
        raise ContractError("strategy requires an estimator with decision values")
    return learner.estimator.decision_values(check_matrix(pool, "pool"))


def _probas(learner, pool) -> np.ndarray:
    if not getattr(learner.estimator, "probabilistic", False):
        raise ContractError("strategy requires a probabilistic estimator")
    return learner.predict_proba(pool)


def svm_binary_minimum(learner, pool) -> np.ndarray:
    """Negated distance to the closest per-label decision boundary."""
    D = _decisions(learner, pool)
    return -np.abs(D).min(axis=1)


def _hinge_vs_reference(signed_pred, reference) -> np.ndarray:
    # sum_j max(0, 1 - p_j * r_j)
    return np.maximum(0.0, 1.0 - signed_pred * reference).sum(axis=-1)


def _signed_predictions(D) -> np.ndarray:
    return 2.0 * (D >= 0) - 1.0


def max_loss(learner, pool) -> np.ndarray:
    """Hinge loss of the hard predictions against the one-hot reference
    pattern of the most probable label."""
    D = _decisions(learner, pool)
    P = _probas(learner, pool)
    p_signed = _signed_predictions(D)
    c_star = np.argmax(P, axis=1)  # ties to lower label index via argmax
    ref = -np.ones_like(D)
    ref[np.arange(D.shape[0]), c_star] = 1.0
    return _hinge_vs_reference(p_signed, ref)


def mean_max_loss(learner, pool) -> np.ndarray:
    """Mean hinge loss against every one-hot reference pattern."""
    D = _decisions(learner, pool)
    p_signed = _signed_predictions(D)
    n, L = D.shape
    total = np.zeros(n)
    for c in range(L):
        ref = -np.ones(L)
        ref[c] = 1.0
        total += _hinge_vs_reference(p_signed, ref)
    return total / L


def min_confidence(learner, pool) -> np.ndarray:
    P = _probas(learner, pool)
    return -np.abs(2.0 * P - 1.0).min(axis=1)


def avg_confidence(learner, pool) -> np.ndarray:
    P = _probas(learner, pool)
    return -np.abs(2.0 * P - 1.0).mean(axis=1)


def min_score(learner, pool) -> np.ndarray:
    D = _decisions(learner, pool)
    s = D * _signed_predictions(D)  # equals |D| under the sign convention
    return -s.min(axis=1)


def avg_score(learner, pool) -> np.ndarray:
    D = _decisions(learner, pool)
    s = D * _signed_predictions(D)
    return -s.mean(axis=1)


STRATEGIES = {
    "svm_binary_minimum": svm_binary_minimum,
    "max_loss": max_loss,
    "mean_max_loss": mean_max_loss,
    "min_confidence": min_confidence,
    "avg_confidence": avg_confidence,
    "min_score": min_score,
    "avg_score": avg_score,
}
