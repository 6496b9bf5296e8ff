"""Stream-based sampling: per-instance query-or-skip decisions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .committee import Committee, vote_entropy
from .core import NotFittedError, check_matrix
from .uncertainty import MEASURES

QUERY = "query"
SKIP = "skip"


@dataclass(frozen=True)
class StreamDecision:
    verdict: str           # QUERY or SKIP
    utility: float

    @property
    def should_query(self) -> bool:
        return self.verdict == QUERY


def stream_decide(learner, instance, measure: str = "least_confident",
                  threshold: float = 0.0) -> StreamDecision:
    """Query iff the instance's uncertainty reaches the threshold.

    Comparison is >=, so a threshold of 0 queries everything.
    """
    if not learner.fitted:
        raise NotFittedError("stream_decide requires a fitted learner")
    if not np.isfinite(threshold):
        raise ValueError("threshold must be finite")
    x = check_matrix(instance, "instance")
    utility = float(MEASURES[measure](learner.predict_proba(x))[0])
    return StreamDecision(QUERY if utility >= threshold else SKIP, utility)


def qbd_decide(committee: Committee, instance) -> StreamDecision:
    """Query-by-disagreement: query iff member votes are not unanimous.

    Skipped instances are discarded without self-labeling.
    """
    x = check_matrix(instance, "instance")
    votes = committee.vote(x)[0]
    unanimous = bool(np.all(votes == votes[0]))
    utility = float(vote_entropy(committee, x)[0])
    return StreamDecision(SKIP if unanimous else QUERY, utility)
