"""Built-in estimators: Gaussian naive Bayes, kNN, one-vs-rest logistic
regression, and an RBF-kernel Gaussian process regressor.

All estimators are refit-based (no incremental updates) and deterministic.
Fitted models are immutable apart from refitting.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import cho_factor, cho_solve, solve_triangular
from scipy.spatial.distance import cdist
from scipy.special import expit, logsumexp

from .core import ContractError, NotFittedError, check_labels, check_matrix

VARIANCE_FLOOR = 1e-9


class GaussianNB:
    """Gaussian naive Bayes with per-feature class-conditional normals."""

    probabilistic = True
    decision_scores = False
    regression = False

    def __init__(self):
        self.classes_ = None

    def fit(self, X, y):
        X = check_matrix(X)
        y = np.asarray(y)
        if X.shape[1] == 0:
            raise ValueError("zero features")
        self.classes_, counts = np.unique(y, return_counts=True)
        n, _ = X.shape
        self.theta_ = np.stack([X[y == c].mean(axis=0) for c in self.classes_])
        self.var_ = np.stack([
            np.maximum(X[y == c].var(axis=0), VARIANCE_FLOOR) for c in self.classes_
        ])
        self.class_log_prior_ = np.log(counts / n)
        return self

    def _joint_log_likelihood(self, X):
        if self.classes_ is None:
            raise NotFittedError("GaussianNB is not fitted")
        X = check_matrix(X)
        # log N(x; mu, var) summed over features, per class
        ll = []
        for c in range(len(self.classes_)):
            log_det = np.sum(np.log(2.0 * np.pi * self.var_[c]))
            sq = np.sum((X - self.theta_[c]) ** 2 / self.var_[c], axis=1)
            ll.append(self.class_log_prior_[c] - 0.5 * (log_det + sq))
        return np.stack(ll, axis=1)

    def predict_proba(self, X):
        jll = self._joint_log_likelihood(X)
        return np.exp(jll - logsumexp(jll, axis=1, keepdims=True))

    def predict(self, X):
        return self.classes_[np.argmax(self._joint_log_likelihood(X), axis=1)]


class KnnClassifier:
    """k-nearest-neighbor classifier, Euclidean metric.

    Distance ties are broken by lower training index; predict_proba rows are
    neighbor class frequencies.
    """

    probabilistic = True
    decision_scores = False
    regression = False

    def __init__(self, k: int = 3):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.k = k
        self.classes_ = None

    def fit(self, X, y):
        X = check_matrix(X)
        y = np.asarray(y)
        if self.k > X.shape[0]:
            raise ValueError(f"k={self.k} exceeds {X.shape[0]} training rows")
        self._X = X
        self._y = y
        self.classes_ = np.unique(y)
        return self

    def _neighbor_labels(self, X):
        if self.classes_ is None:
            raise NotFittedError("KnnClassifier is not fitted")
        d = cdist(check_matrix(X), self._X)
        # stable argsort breaks distance ties by lower training index
        order = np.argsort(d, axis=1, kind="stable")[:, : self.k]
        return self._y[order]

    def predict_proba(self, X):
        labels = self._neighbor_labels(X)
        proba = np.stack(
            [(labels == c).mean(axis=1) for c in self.classes_], axis=1
        )
        return proba

    def predict(self, X):
        return self.classes_[np.argmax(self.predict_proba(X), axis=1)]


def _logistic_loss_grad(w, b, X, t, l2):
    """Regularized binary log loss and its gradient.

    Returns (loss, grad_w, grad_b); the L2 penalty applies to w only.
    """
    z = X @ w + b
    p = expit(z)
    eps = 1e-12
    loss = -np.mean(t * np.log(p + eps) + (1 - t) * np.log(1 - p + eps))
    loss += 0.5 * l2 * float(w @ w)
    err = p - t
    grad_w = X.T @ err / X.shape[0] + l2 * w
    grad_b = float(np.mean(err))
    return loss, grad_w, grad_b


class LogisticOvr:
    """One-vs-rest logistic regression by full-batch gradient descent.

    Accepts either multiclass integer labels (one-hot expanded internally,
    probabilities renormalized to sum 1) or a binary multilabel indicator
    matrix (per-label sigmoid probabilities).
    """

    probabilistic = True
    decision_scores = True
    regression = False

    def __init__(self, learning_rate: float = 0.1, epochs: int = 500, l2: float = 1e-4):
        self.learning_rate = learning_rate
        self.epochs = epochs
        self.l2 = l2
        self.classes_ = None

    def fit(self, X, Y):
        X = check_matrix(X)
        Y = check_labels(Y, X.shape[0], "Y")
        if Y.ndim == 1:
            self.multilabel_ = False
            self.classes_ = np.unique(Y)
            T = np.stack([(Y == c).astype(float) for c in self.classes_], axis=1)
        else:
            self.multilabel_ = True
            T = np.asarray(Y, dtype=float)
            self.classes_ = np.arange(T.shape[1])
        n_labels = T.shape[1]
        pos = T.sum(axis=0)
        if n_labels > 1 and ((pos == 0) | (pos == T.shape[0])).any():
            raise ValueError("each label column needs at least one positive and one negative")
        d = X.shape[1]
        self.coef_ = np.zeros((n_labels, d))
        self.intercept_ = np.zeros(n_labels)
        self.loss_history_ = []
        for _ in range(self.epochs):
            total = 0.0
            for j in range(n_labels):
                loss, gw, gb = _logistic_loss_grad(
                    self.coef_[j], self.intercept_[j], X, T[:, j], self.l2
                )
                self.coef_[j] -= self.learning_rate * gw
                self.intercept_[j] -= self.learning_rate * gb
                total += loss
            self.loss_history_.append(total)
        if not np.all(np.isfinite(self.coef_)):
            raise FloatingPointError("logistic training diverged to non-finite weights")
        return self

    def decision_values(self, X):
        if self.classes_ is None:
            raise NotFittedError("LogisticOvr is not fitted")
        return check_matrix(X) @ self.coef_.T + self.intercept_

    def predict_proba(self, X):
        p = expit(self.decision_values(X))
        if not self.multilabel_:
            p = p / p.sum(axis=1, keepdims=True)
        return p

    def predict(self, X):
        d = self.decision_values(X)
        if self.multilabel_:
            return (d >= 0).astype(int)
        return self.classes_[np.argmax(d, axis=1)]


class GpRegressor:
    """Gaussian process regression with an RBF kernel and fixed hyperparameters.

    Kernel: k(a, b) = signal_variance * exp(-||a-b||^2 / (2 * length_scale^2)).
    The Gram matrix gets noise_variance plus an escalating jitter on the
    diagonal before Cholesky factorization.
    """

    probabilistic = False
    decision_scores = False
    regression = True

    JITTER_START = 1e-10
    JITTER_MAX = 1e-4

    def __init__(self, length_scale: float = 1.0, signal_variance: float = 1.0,
                 noise_variance: float = 0.0):
        if length_scale <= 0:
            raise ValueError("length_scale must be positive")
        if signal_variance <= 0:
            raise ValueError("signal_variance must be positive")
        if noise_variance < 0:
            raise ValueError("noise_variance must be non-negative")
        self.length_scale = length_scale
        self.signal_variance = signal_variance
        self.noise_variance = noise_variance
        self._X = None

    def _kernel(self, A, B):
        sq = cdist(A, B, "sqeuclidean")
        return self.signal_variance * np.exp(-sq / (2.0 * self.length_scale ** 2))

    def fit(self, X, y):
        X = check_matrix(X)
        if X.shape[0] == 0:
            raise ValueError("cannot fit GP on empty data")
        y = np.asarray(y, dtype=float)
        K = self._kernel(X, X) + self.noise_variance * np.eye(X.shape[0])
        jitter = self.JITTER_START
        while True:
            try:
                self._chol = cho_factor(K + jitter * np.eye(X.shape[0]), lower=True)
                break
            except np.linalg.LinAlgError:
                jitter *= 10.0
                if jitter > self.JITTER_MAX:
                    raise np.linalg.LinAlgError(
                        "kernel matrix not positive definite after jitter escalation"
                    )
        self._X = X
        self._y = y
        self._alpha = cho_solve(self._chol, y)
        return self

    def predict(self, X, return_std: bool = False):
        if self._X is None:
            raise NotFittedError("GpRegressor is not fitted")
        X = check_matrix(X)
        k_star = self._kernel(X, self._X)
        mean = k_star @ self._alpha
        v = solve_triangular(self._chol[0], k_star.T, lower=True)
        var = np.maximum(self.signal_variance - np.sum(v * v, axis=0), 0.0)
        if return_std:
            return mean, np.sqrt(var)
        return mean
