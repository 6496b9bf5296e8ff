"""Committee learners and disagreement-based query strategies.

Classification committees expose hard votes and a consensus probability
distribution aligned over the union of classes any member has seen; absent
classes contribute probability zero. Regression committees score instances
by the spread of member predictions.
"""

from __future__ import annotations

import numpy as np

from .core import (
    ContractError,
    NotFittedError,
    QuerySelection,
    QueryStrategy,
    check_matrix,
    select_argmax,
)
from .uncertainty import _LOG_CLAMP, classifier_entropy


class Committee:
    """A committee of fitted ActiveLearner members (at least two)."""

    def __init__(self, members, strategy: QueryStrategy | None = None):
        members = list(members)
        if len(members) < 2:
            raise ValueError("a committee requires at least 2 members")
        self.members = members
        self.strategy = strategy

    @property
    def classes_(self) -> np.ndarray:
        cls = [m.estimator.classes_ for m in self.members]
        if any(c is None for c in cls):
            raise NotFittedError("committee member is not fitted")
        return np.unique(np.concatenate(cls))

    def vote(self, pool) -> np.ndarray:
        """Hard predictions, one column per member."""
        pool = check_matrix(pool, "pool")
        if pool.shape[0] == 0:
            raise ValueError("pool is empty")
        return np.stack([m.predict(pool) for m in self.members], axis=1)

    def predict_proba(self, pool) -> np.ndarray:
        """Consensus distribution: mean of member probabilities over the
        union class ordering."""
        pool = check_matrix(pool, "pool")
        classes = self.classes_
        acc = np.zeros((pool.shape[0], len(classes)))
        for m in self.members:
            if not getattr(m.estimator, "probabilistic", False):
                raise ContractError("committee member estimator is not probabilistic")
            p = m.predict_proba(pool)
            cols = np.searchsorted(classes, m.estimator.classes_)
            acc[:, cols] += p
        return acc / len(self.members)

    def predict(self, pool) -> np.ndarray:
        """Consensus-majority label via the aligned probability mean."""
        return self.classes_[np.argmax(self.predict_proba(pool), axis=1)]

    def query(self, pool, n: int = 1) -> QuerySelection:
        if self.strategy is None:
            raise ValueError("committee has no query strategy")
        pool = check_matrix(pool, "pool")
        idx = np.asarray(self.strategy(self, pool, n))
        return QuerySelection(indices=idx, instances=pool[idx])

    def teach(self, X_new, y_new, bootstrap: bool = False, seed: int = 0) -> "Committee":
        for i, m in enumerate(self.members):
            m.teach(X_new, y_new, bootstrap=bootstrap, seed=seed + i if bootstrap else None)
        return self


class CommitteeRegressor:
    """A committee of regression learners; utility is prediction spread."""

    def __init__(self, members, strategy: QueryStrategy | None = None):
        members = list(members)
        if len(members) < 2:
            raise ValueError("a committee requires at least 2 members")
        for m in members:
            if not getattr(m.estimator, "regression", False):
                raise ContractError("CommitteeRegressor members must be regression estimators")
        self.members = members
        self.strategy = strategy

    def predict_members(self, pool) -> np.ndarray:
        pool = check_matrix(pool, "pool")
        if pool.shape[0] == 0:
            raise ValueError("pool is empty")
        return np.stack([np.asarray(m.predict(pool)) for m in self.members], axis=1)

    def predict(self, pool) -> np.ndarray:
        return self.predict_members(pool).mean(axis=1)

    def query(self, pool, n: int = 1) -> QuerySelection:
        if self.strategy is None:
            raise ValueError("committee has no query strategy")
        pool = check_matrix(pool, "pool")
        idx = np.asarray(self.strategy(self, pool, n))
        return QuerySelection(indices=idx, instances=pool[idx])

    def teach(self, X_new, y_new, bootstrap: bool = False, seed: int = 0) -> "CommitteeRegressor":
        for i, m in enumerate(self.members):
            m.teach(X_new, y_new, bootstrap=bootstrap, seed=seed + i if bootstrap else None)
        return self


def vote_entropy(committee: Committee, pool) -> np.ndarray:
    """Entropy of the member-vote distribution per instance."""
    votes = committee.vote(pool)
    classes = committee.classes_
    m = votes.shape[1]
    freq = np.stack([(votes == c).sum(axis=1) for c in classes], axis=1) / m
    fc = np.clip(freq, _LOG_CLAMP, 1.0)
    return -np.sum(np.where(freq > 0, freq * np.log(fc), 0.0), axis=1)


def consensus_entropy(committee: Committee, pool) -> np.ndarray:
    return classifier_entropy(committee.predict_proba(pool))


def max_disagreement(committee: Committee, pool) -> np.ndarray:
    """Largest member-vs-consensus KL divergence per instance."""
    pool = check_matrix(pool, "pool")
    classes = committee.classes_
    consensus = committee.predict_proba(pool)
    qc = np.clip(consensus, _LOG_CLAMP, 1.0)
    best = np.zeros(pool.shape[0])
    for m in committee.members:
        p_full = np.zeros_like(consensus)
        cols = np.searchsorted(classes, m.estimator.classes_)
        p_full[:, cols] = m.predict_proba(pool)
        pc = np.clip(p_full, _LOG_CLAMP, 1.0)
        kl = np.sum(np.where(p_full > 0, p_full * (np.log(pc) - np.log(qc)), 0.0), axis=1)
        best = np.maximum(best, kl)
    return best


def std_sampling(committee: CommitteeRegressor, pool) -> np.ndarray:
    """Population standard deviation of member predictions per instance."""
    return committee.predict_members(pool).std(axis=1)


def vote_entropy_sampling(committee, pool, n=1, selector=select_argmax) -> QuerySelection:
    pool = check_matrix(pool, "pool")
    idx = np.asarray(selector(vote_entropy(committee, pool), n))
    return QuerySelection(indices=idx, instances=pool[idx])


def consensus_entropy_sampling(committee, pool, n=1, selector=select_argmax) -> QuerySelection:
    pool = check_matrix(pool, "pool")
    idx = np.asarray(selector(consensus_entropy(committee, pool), n))
    return QuerySelection(indices=idx, instances=pool[idx])


def max_disagreement_sampling(committee, pool, n=1, selector=select_argmax) -> QuerySelection:
    pool = check_matrix(pool, "pool")
    idx = np.asarray(selector(max_disagreement(committee, pool), n))
    return QuerySelection(indices=idx, instances=pool[idx])
