"""Bayesian optimization over a candidate pool with a regression surrogate.

Maximization convention throughout: the optimizer tracks the largest
observed target; minimize by negating targets before teaching.
"""

from __future__ import annotations

import numpy as np
from scipy.special import ndtr

from .core import ActiveLearner, NotFittedError, QuerySelection, QueryStrategy, check_matrix, select_argmax

DEFAULT_XI = 0.01
DEFAULT_KAPPA = 2.0

_SQRT_2PI = np.sqrt(2.0 * np.pi)


def _norm_pdf(z):
    return np.exp(-0.5 * z * z) / _SQRT_2PI


def _check_sigma(sigma):
    sigma = np.asarray(sigma, dtype=float)
    if (sigma < 0).any():
        raise ValueError("sigma must be non-negative")
    return sigma


def acquisition_pi(mu, sigma, f_best, xi: float = DEFAULT_XI):
    """Probability of improving on f_best by at least xi."""
    mu = np.asarray(mu, dtype=float)
    sigma = _check_sigma(sigma)
    gap = mu - f_best - xi
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(sigma > 0, gap / np.where(sigma > 0, sigma, 1.0), 0.0)
    return np.where(sigma > 0, ndtr(z), (gap > 0).astype(float))


def acquisition_ei(mu, sigma, f_best, xi: float = DEFAULT_XI):
    """Expected improvement over f_best + xi."""
    mu = np.asarray(mu, dtype=float)
    sigma = _check_sigma(sigma)
    gap = mu - f_best - xi
    safe = np.where(sigma > 0, sigma, 1.0)
    z = gap / safe
    ei = gap * ndtr(z) + sigma * _norm_pdf(z)
    return np.where(sigma > 0, ei, np.maximum(0.0, gap))


def acquisition_ucb(mu, sigma, kappa: float = DEFAULT_KAPPA):
    mu = np.asarray(mu, dtype=float)
    sigma = _check_sigma(sigma)
    return mu + kappa * sigma


ACQUISITIONS = ("pi", "ei", "ucb")


class BayesianOptimizer:
    """Surrogate-backed optimizer querying the acquisition argmax.

    The surrogate estimator must be a regressor returning (mean, std) via
    predict(X, return_std=True).
    """

    def __init__(self, estimator, acquisition: str = "ei", xi: float = DEFAULT_XI,
                 kappa: float = DEFAULT_KAPPA, X=None, y=None):
        if acquisition not in ACQUISITIONS:
            raise ValueError(f"unknown acquisition {acquisition!r}")
        if xi < 0 or kappa < 0:
            raise ValueError("xi and kappa must be >= 0")
        self.acquisition = acquisition
        self.xi = xi
        self.kappa = kappa
        self.learner = ActiveLearner(estimator, strategy=QueryStrategy(utility=self._utility))
        self.X_max: np.ndarray | None = None
        self.y_max: float = -np.inf
        if X is not None:
            self.teach(X, y)

    def _utility(self, learner, pool):
        mu, sigma = learner.estimator.predict(pool, return_std=True)
        if self.acquisition == "pi":
            return acquisition_pi(mu, sigma, self.y_max, self.xi)
        if self.acquisition == "ei":
            return acquisition_ei(mu, sigma, self.y_max, self.xi)
        return acquisition_ucb(mu, sigma, self.kappa)

    def query(self, candidates, n: int = 1, selector=select_argmax) -> QuerySelection:
        if not self.learner.fitted:
            raise NotFittedError("optimizer surrogate is not fitted")
        candidates = check_matrix(candidates, "candidates")
        if candidates.shape[0] == 0:
            raise ValueError("candidate set is empty")
        idx = np.asarray(selector(self._utility(self.learner, candidates), n))
        return QuerySelection(indices=idx, instances=candidates[idx])

    def teach(self, X_new, y_new) -> "BayesianOptimizer":
        X_new = check_matrix(X_new)
        y_new = np.asarray(y_new, dtype=float)
        self.learner.teach(X_new, y_new)
        best = int(np.argmax(y_new))
        if y_new[best] > self.y_max:
            self.y_max = float(y_new[best])
            self.X_max = X_new[best].copy()
        return self

    def predict(self, X, return_std: bool = False):
        return self.learner.estimator.predict(check_matrix(X), return_std=return_std)
