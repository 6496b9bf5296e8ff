"""Expected error reduction: one-step lookahead over candidate labelings.

For each candidate pool instance, the estimator is refit on the training set
plus that instance under every possible label; the expected post-refit pool
error (weighted by the current model's label probabilities) becomes the
candidate's negated utility. Quadratic in pool size, hence the optional
seeded candidate subsampling.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass

import numpy as np

from .core import ContractError, NotFittedError, QuerySelection, QueryStrategy, check_matrix, select_argmax
from .uncertainty import classifier_entropy, classifier_uncertainty


@dataclass(frozen=True)
class EerConfig:
    loss: str = "binary"            # "binary" (1 - max proba) or "log" (entropy)
    subsample_fraction: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.loss not in ("binary", "log"):
            raise ValueError(f"unknown loss {self.loss!r}")
        if not 0.0 < self.subsample_fraction <= 1.0:
            raise ValueError("subsample_fraction must be in (0, 1]")


def _pool_error(P, loss: str) -> float:
    if loss == "binary":
        return float(classifier_uncertainty(P).sum())
    return float(classifier_entropy(P).sum())


def expected_error_reduction(learner, pool, config: EerConfig = EerConfig()) -> np.ma.MaskedArray:
    """Negated expected pool error per candidate; non-sampled candidates masked.

    The learner is never mutated: each lookahead refit happens on a private
    copy of the estimator.
    """
    if not learner.fitted:
        raise NotFittedError("expected_error_reduction requires a fitted learner")
    if not getattr(learner.estimator, "probabilistic", False):
        raise ContractError("expected_error_reduction requires a probabilistic estimator")
    pool = check_matrix(pool, "pool")
    p = pool.shape[0]
    if p == 0:
        raise ValueError("pool is empty")

    included = np.ones(p, dtype=bool)
    if config.subsample_fraction < 1.0:
        n_keep = max(1, int(round(config.subsample_fraction * p)))
        rng = np.random.default_rng(config.seed)
        included[:] = False
        included[rng.choice(p, size=n_keep, replace=False)] = True

    proba = learner.predict_proba(pool)
    classes = learner.estimator.classes_
    X_train, y_train = learner.X_train, learner.y_train
    utilities = np.zeros(p)
    scratch = copy.deepcopy(learner.estimator)
    for i in np.flatnonzero(included):
        X_aug = np.vstack([X_train, pool[i : i + 1]])
        expected = 0.0
        for ci, c in enumerate(classes):
            w = proba[i, ci]
            if w == 0.0:
                continue
            y_aug = np.concatenate([y_train, [c]])
            scratch.fit(X_aug, y_aug)
            expected += w * _pool_error(scratch.predict_proba(pool), config.loss)
        utilities[i] = -expected
    return np.ma.MaskedArray(utilities, mask=~included)


def eer_strategy(config: EerConfig = EerConfig(), selector=select_argmax) -> QueryStrategy:
    return QueryStrategy(
        utility=lambda learner, pool: expected_error_reduction(learner, pool, config),
        selector=selector,
    )


def eer_sampling(learner, pool, n: int = 1, config: EerConfig = EerConfig(),
                 selector=select_argmax) -> QuerySelection:
    pool = check_matrix(pool, "pool")
    idx = np.asarray(selector(expected_error_reduction(learner, pool, config), n))
    return QuerySelection(indices=idx, instances=pool[idx])
