"""Learner abstractions and the utility/selector composition.

Every query strategy in this package factors into a utility function
(scoring each pool instance, higher = more informative) and a selector
(turning scores into pool indices). Learners hold an estimator, the
accumulated training data, and one such strategy.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np


class NotFittedError(RuntimeError):
    """An operation requiring a fitted estimator was called before fitting."""


class ContractError(TypeError):
    """A capability-gated estimator behavior was invoked without the capability."""


class QuerySelection(NamedTuple):
    indices: np.ndarray
    instances: np.ndarray


def check_matrix(X, name="X") -> np.ndarray:
    """Validate and return a dense 2-D float matrix with finite entries."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got ndim={X.ndim}")
    if X.size and not np.all(np.isfinite(X)):
        raise ValueError(f"{name} contains non-finite values")
    return X


def check_labels(y, n_rows: int, name="y") -> np.ndarray:
    y = np.asarray(y)
    if y.ndim == 1:
        pass
    elif y.ndim == 2:
        # multilabel indicator matrix
        if not np.isin(y, (0, 1)).all():
            raise ValueError(f"{name} indicator matrix must be binary")
    else:
        raise ValueError(f"{name} must be 1-D labels or a 2-D indicator matrix")
    if len(y) != n_rows:
        raise ValueError(f"{name} length {len(y)} does not match {n_rows} rows")
    return y


def check_probabilities(P, name="P") -> np.ndarray:
    """Validate a class-probability matrix: entries in [0,1], rows sum to 1."""
    P = np.asarray(P, dtype=float)
    if P.ndim != 2 or P.size == 0:
        raise ValueError(f"{name} must be a non-empty 2-D matrix")
    if (P < -1e-9).any() or (P > 1 + 1e-9).any():
        raise ValueError(f"{name} has entries outside [0, 1]")
    sums = P.sum(axis=1)
    if not np.allclose(sums, 1.0, atol=1e-9):
        raise ValueError(f"{name} rows must sum to 1 within 1e-9")
    return P


def _utilities_and_mask(utilities):
    """Split a plain or masked utility array into (values, included-mask)."""
    if isinstance(utilities, np.ma.MaskedArray):
        values = np.asarray(utilities.filled(np.nan), dtype=float)
        included = ~np.ma.getmaskarray(utilities)
    else:
        values = np.asarray(utilities, dtype=float)
        included = np.ones(values.shape, dtype=bool)
    if values.ndim != 1:
        raise ValueError("utilities must be 1-dimensional")
    if np.isnan(values[included]).any():
        raise ValueError("utilities contain NaN")
    return values, included


def select_argmax(utilities, n: int) -> np.ndarray:
    """Indices of the n largest utilities, descending, ties to lower index.

    Masked entries (np.ma) are excluded from selection entirely.
    """
    values, included = _utilities_and_mask(utilities)
    candidates = np.flatnonzero(included)
    if not 0 < n <= candidates.size:
        raise ValueError(f"n={n} out of range for {candidates.size} selectable utilities")
    # stable sort on negated values breaks ties by lower index
    order = candidates[np.argsort(-values[candidates], kind="stable")]
    return order[:n]


def select_shuffled_argmax(utilities, n: int, seed: int) -> np.ndarray:
    """Like select_argmax, but equal utilities are ordered by a seeded shuffle."""
    values, included = _utilities_and_mask(utilities)
    candidates = np.flatnonzero(included)
    if not 0 < n <= candidates.size:
        raise ValueError(f"n={n} out of range for {candidates.size} selectable utilities")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(candidates)
    order = perm[np.argsort(-values[perm], kind="stable")]
    return order[:n]


@dataclass(frozen=True)
class QueryStrategy:
    """A utility function paired with a selector.

    utility(learner, pool) -> UtilityArray (optionally np.ma masked);
    selector(utilities, n) -> index array.
    """

    utility: Callable
    selector: Callable = select_argmax

    def __call__(self, learner, pool: np.ndarray, n: int) -> np.ndarray:
        return self.selector(self.utility(learner, pool), n)


class ActiveLearner:
    """An estimator plus accumulated training data and a query strategy.

    `fit` replaces the training set; `teach` appends to it and refits.
    """

    def __init__(self, estimator, strategy: QueryStrategy, X=None, y=None):
        self.estimator = estimator
        self.strategy = strategy
        self.X_train: np.ndarray | None = None
        self.y_train: np.ndarray | None = None
        if X is not None:
            self.fit(X, y)

    @property
    def fitted(self) -> bool:
        return self.X_train is not None

    def fit(self, X, y) -> "ActiveLearner":
        X = check_matrix(X)
        if X.shape[0] == 0:
            raise ValueError("cannot fit on an empty training set")
        y = check_labels(y, X.shape[0])
        self.estimator.fit(X, y)
        self.X_train = X
        self.y_train = y
        return self

    def teach(self, X_new, y_new, bootstrap: bool = False, seed: int | None = None) -> "ActiveLearner":
        if not self.fitted:
            return self.fit(X_new, y_new)
        X_new = check_matrix(X_new)
        if X_new.shape[0] == 0:
            raise ValueError("cannot teach zero instances")
        if X_new.shape[1] != self.X_train.shape[1]:
            raise ValueError(
                f"feature count mismatch: taught {X_new.shape[1]}, trained {self.X_train.shape[1]}"
            )
        y_new = check_labels(y_new, X_new.shape[0])
        self.X_train = np.vstack([self.X_train, X_new])
        self.y_train = np.concatenate([self.y_train, y_new]) if y_new.ndim == 1 \
            else np.vstack([self.y_train, y_new])
        if bootstrap:
            rng = np.random.default_rng(seed)
            idx = rng.integers(0, self.X_train.shape[0], self.X_train.shape[0])
            self.estimator.fit(self.X_train[idx], self.y_train[idx])
        else:
            self.estimator.fit(self.X_train, self.y_train)
        return self

    def query(self, pool, n: int = 1) -> QuerySelection:
        if not self.fitted:
            raise NotFittedError("query requires a fitted learner")
        pool = check_matrix(pool, "pool")
        if pool.shape[0] == 0:
            raise ValueError("pool is empty")
        idx = np.asarray(self.strategy(self, pool, n))
        return QuerySelection(indices=idx, instances=pool[idx])

    def predict(self, X):
        if not self.fitted:
            raise NotFittedError("predict requires a fitted learner")
        return self.estimator.predict(check_matrix(X))

    def predict_proba(self, X):
        if not self.fitted:
            raise NotFittedError("predict_proba requires a fitted learner")
        if not getattr(self.estimator, "probabilistic", False):
            raise ContractError("estimator does not expose probabilities")
        return self.estimator.predict_proba(check_matrix(X))

    def score(self, X, y) -> float:
        """Classification accuracy, or R-squared for regression estimators."""
        if not self.fitted:
            raise NotFittedError("score requires a fitted learner")
        X = check_matrix(X)
        if X.shape[0] == 0:
            raise ValueError("cannot score on empty data")
        y = np.asarray(y)
        pred = self.estimator.predict(X)
        if getattr(self.estimator, "regression", False):
            ss_res = float(np.sum((y - pred) ** 2))
            ss_tot = float(np.sum((y - np.mean(y)) ** 2))
            return 1.0 - ss_res / ss_tot if ss_tot > 0 else (1.0 if ss_res == 0 else 0.0)
        pred = np.asarray(pred)
        if y.ndim == 2:
            return float(np.mean(np.all(pred == y, axis=1)))
        return float(np.mean(pred == y))
