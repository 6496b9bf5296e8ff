"""activekit: modular active learning with composable query strategies."""

from .core import (
    ActiveLearner,
    ContractError,
    NotFittedError,
    QuerySelection,
    QueryStrategy,
    select_argmax,
    select_shuffled_argmax,
)
from .committee import Committee, CommitteeRegressor
from .bayesopt import BayesianOptimizer
from .estimators import GaussianNB, GpRegressor, KnnClassifier, LogisticOvr

__all__ = [
    "ActiveLearner",
    "BayesianOptimizer",
    "Committee",
    "CommitteeRegressor",
    "ContractError",
    "GaussianNB",
    "GpRegressor",
    "KnnClassifier",
    "LogisticOvr",
    "NotFittedError",
    "QuerySelection",
    "QueryStrategy",
    "select_argmax",
    "select_shuffled_argmax",
]

__version__ = "0.1.0"
