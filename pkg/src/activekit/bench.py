"""Benchmark harness: dataset ingestion, learning-curve experiments, and
the runtime-comparison protocol (10 single-instance queries per run,
averaged over repeats, warm-up run discarded).
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import multilabel as ml
from .batch_density import density_weighted_utility_fn, ranked_batch
from .committee import (
    Committee,
    consensus_entropy,
    max_disagreement,
    vote_entropy,
)
from .core import ActiveLearner, QueryStrategy, select_argmax
from .eer import EerConfig, eer_strategy
from .estimators import GaussianNB, GpRegressor, KnnClassifier, LogisticOvr
from .uncertainty import classifier_uncertainty, uncertainty_utility


class DataError(ValueError):
    """Malformed dataset file or row."""


# ---------------------------------------------------------------------------
# dataset IO

def load_csv(path):
    """Load a dataset CSV: numeric feature columns, labels in a `label`
    column or several `label_*` columns (multilabel)."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"no such file: {path}")
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    if not rows:
        raise DataError(f"empty file: {path}")
    header = rows[0]
    label_cols = [i for i, h in enumerate(header)
                  if h.strip() == "label" or h.strip().startswith("label_")]
    if not label_cols:
        raise DataError(f"{path}: no `label` or `label_*` column in header")
    feature_cols = [i for i in range(len(header)) if i not in label_cols]
    X, Y = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise DataError(f"{path}:{lineno}: expected {len(header)} columns, got {len(row)}")
        try:
            X.append([float(row[i]) for i in feature_cols])
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: non-numeric feature value ({exc})") from None
        try:
            Y.append([int(row[i]) for i in label_cols])
        except ValueError as exc:
            raise DataError(f"{path}:{lineno}: non-integer label ({exc})") from None
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=int)
    if len(label_cols) == 1:
        return X, Y[:, 0]
    return X, Y


def save_csv(path, X, y, comment: str | None = None):
    X = np.asarray(X)
    y = np.asarray(y)
    with open(path, "w", newline="") as fh:
        if comment:
            fh.write(f"# {comment}\n")
        w = csv.writer(fh)
        if y.ndim == 2:
            labels = [f"label_{j}" for j in range(y.shape[1])]
        else:
            labels = ["label"]
        w.writerow([f"f{j}" for j in range(X.shape[1])] + labels)
        for xi, yi in zip(X, np.atleast_2d(y.T).T):
            w.writerow([repr(float(v)) for v in xi] + [int(v) for v in np.atleast_1d(yi)])


def make_two_gaussians(rows: int = 400, seed: int = 7, center: float = 2.0):
    """Balanced binary dataset: unit-variance Gaussians at (-center, 0)
    and (+center, 0)."""
    rng = np.random.default_rng(seed)
    half = rows // 2
    X0 = rng.normal(loc=(-center, 0.0), scale=1.0, size=(half, 2))
    X1 = rng.normal(loc=(center, 0.0), scale=1.0, size=(rows - half, 2))
    X = np.vstack([X0, X1])
    y = np.concatenate([np.zeros(half, dtype=int), np.ones(rows - half, dtype=int)])
    perm = rng.permutation(rows)
    return X[perm], y[perm]


SYNTH_KINDS = {"two-gaussians": make_two_gaussians}


# ---------------------------------------------------------------------------
# registries

def build_estimator(name: str):
    makers = {
        "gnb": GaussianNB,
        "knn": lambda: KnnClassifier(k=3),
        "logistic_ovr": LogisticOvr,
        "gp": GpRegressor,
    }
    if name not in makers:
        raise KeyError(f"unknown estimator {name!r}; valid: {sorted(makers)}")
    return makers[name]()


STRATEGY_NAMES = [
    "random", "least_confident", "margin", "entropy",
    "qbc_vote", "qbc_consensus", "qbc_kl",
    "eer_binary", "eer_log", "ranked_batch", "density_lc",
    "svm_bin_min", "max_loss", "mean_max_loss",
    "min_conf", "avg_conf", "min_score", "avg_score",
]

_COMMITTEE_UTILITIES = {
    "qbc_vote": vote_entropy,
    "qbc_consensus": consensus_entropy,
    "qbc_kl": max_disagreement,
}

_MULTILABEL_UTILITIES = {
    "svm_bin_min": ml.svm_binary_minimum,
    "max_loss": ml.max_loss,
    "mean_max_loss": ml.mean_max_loss,
    "min_conf": ml.min_confidence,
    "avg_conf": ml.avg_confidence,
    "min_score": ml.min_score,
    "avg_score": ml.avg_score,
}


class Session:
    """A live learner (single or committee) driving query/teach/score."""

    def __init__(self, strategy_name: str, estimator_name: str, seed: int,
                 X_init, y_init, committee_size: int = 3):
        if strategy_name not in STRATEGY_NAMES:
            raise KeyError(
                f"unknown strategy {strategy_name!r}; valid: {STRATEGY_NAMES}")
        self.strategy_name = strategy_name
        self._rng = np.random.default_rng(seed)

        if strategy_name in _COMMITTEE_UTILITIES:
            members = []
            n = len(X_init)
            for m in range(committee_size):
                rng = np.random.default_rng(seed + m)
                idx = rng.integers(0, n, n)
                members.append(ActiveLearner(
                    build_estimator(estimator_name), strategy=None,
                    X=np.asarray(X_init)[idx], y=np.asarray(y_init)[idx]))
            strat = QueryStrategy(utility=_COMMITTEE_UTILITIES[strategy_name])
            self.model = Committee(members, strategy=strat)
            return

        est = build_estimator(estimator_name)
        if strategy_name == "random":
            strat = QueryStrategy(utility=lambda lrn, pool: self._rng.random(len(pool)))
        elif strategy_name in ("least_confident", "margin", "entropy"):
            strat = QueryStrategy(utility=uncertainty_utility(strategy_name))
        elif strategy_name in ("eer_binary", "eer_log"):
            loss = "binary" if strategy_name == "eer_binary" else "log"
            strat = eer_strategy(EerConfig(loss=loss, seed=seed))
        elif strategy_name == "density_lc":
            strat = QueryStrategy(utility=density_weighted_utility_fn(classifier_uncertainty))
        elif strategy_name == "ranked_batch":
            strat = None  # handled specially in query()
        else:
            strat = QueryStrategy(utility=_MULTILABEL_UTILITIES[strategy_name])
        self.model = ActiveLearner(est, strategy=strat, X=X_init, y=y_init)

    def query(self, pool, n: int):
        if self.strategy_name == "ranked_batch":
            return ranked_batch(self.model, pool, self.model.X_train, n)
        return self.model.query(pool, n)

    def teach(self, X, y):
        self.model.teach(X, y)

    def score(self, X, y) -> float:
        if isinstance(self.model, Committee):
            pred = self.model.predict(X)
            return float(np.mean(pred == np.asarray(y)))
        return self.model.score(X, y)


# ---------------------------------------------------------------------------
# learning curves

@dataclass
class RunConfig:
    dataset: str | tuple           # path, or an (X, y) pair
    strategy: str = "least_confident"
    estimator: str = "gnb"
    initial_labeled: int = 5
    n_queries: int = 20
    batch_size: int = 1
    seed: int = 0
    test_fraction: float = 0.2


@dataclass
class CurveResult:
    config: RunConfig
    steps: list = field(default_factory=list)  # (query_index, labeled, accuracy, seconds)


def _load(dataset):
    if isinstance(dataset, (str, Path)):
        return load_csv(dataset)
    X, y = dataset
    return np.asarray(X, dtype=float), np.asarray(y)


def split_dataset(X, y, seed: int, initial_labeled: int, test_fraction: float = 0.2):
    """Seeded shuffle into (labeled, pool, test); labeled is stratified so
    every class is represented when possible."""
    n = len(X)
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    n_test = int(round(test_fraction * n))
    test_idx = perm[:n_test]
    rest = perm[n_test:]
    if initial_labeled > len(rest):
        raise DataError("initial_labeled exceeds non-test rows")
    y_rest = y[rest]
    init_idx = []
    if y.ndim == 1:
        for c in np.unique(y_rest):
            where = np.flatnonzero(y_rest == c)
            if len(init_idx) < initial_labeled and len(where):
                init_idx.append(where[0])
    for i in range(len(rest)):
        if len(init_idx) >= initial_labeled:
            break
        if i not in init_idx:
            init_idx.append(i)
    init_idx = np.asarray(sorted(init_idx[:initial_labeled]))
    labeled = rest[init_idx]
    pool = np.delete(rest, init_idx)
    return labeled, pool, test_idx


def run_learning_curve(config: RunConfig) -> CurveResult:
    X, y = _load(config.dataset)
    if config.n_queries < 1:
        raise DataError("n_queries must be >= 1")
    labeled, pool, test = split_dataset(
        X, y, config.seed, config.initial_labeled, config.test_fraction)
    need = config.n_queries * config.batch_size
    if need > len(pool):
        raise DataError(
            f"{config.n_queries} queries x batch {config.batch_size} exceeds pool of {len(pool)}")
    session = Session(config.strategy, config.estimator, config.seed, X[labeled], y[labeled])
    result = CurveResult(config=config)
    n_labeled = len(labeled)
    result.steps.append((0, n_labeled, session.score(X[test], y[test]), 0.0))
    t0 = time.monotonic()
    for q in range(1, config.n_queries + 1):
        sel = session.query(X[pool], config.batch_size)
        chosen = pool[np.asarray(sel.indices)]
        session.teach(X[chosen], y[chosen])
        pool = np.delete(pool, np.asarray(sel.indices))
        n_labeled += config.batch_size
        result.steps.append(
            (q, n_labeled, session.score(X[test], y[test]), time.monotonic() - t0))
    return result


def write_curve_csv(path, result: CurveResult):
    c = result.config
    with open(path, "w", newline="") as fh:
        fh.write(
            f"# config: strategy={c.strategy} estimator={c.estimator} "
            f"initial={c.initial_labeled} queries={c.n_queries} "
            f"batch={c.batch_size} seed={c.seed}\n")
        w = csv.writer(fh)
        w.writerow(["step", "labeled", "accuracy", "seconds"])
        for step, labeled, acc, secs in result.steps:
            w.writerow([step, labeled, f"{acc:.6f}", f"{secs:.6f}"])


# ---------------------------------------------------------------------------
# runtime benchmark

@dataclass
class RuntimeResult:
    rows: list = field(default_factory=list)  # (strategy, mean_s, std_s, repeats, queries)


def run_runtime_bench(strategies, dataset, repeats: int = 10, n_queries: int = 10,
                      estimator: str = "gnb", initial_labeled: int = 10,
                      seed: int = 0) -> RuntimeResult:
    """Time `n_queries` single-instance query+teach iterations per run,
    `repeats` runs per strategy, after one discarded warm-up run."""
    if repeats < 1:
        raise DataError("repeats must be >= 1")
    X, y = _load(dataset)
    labeled, pool0, _ = split_dataset(X, y, seed, initial_labeled)
    result = RuntimeResult()
    for name in strategies:
        times = []
        for rep in range(-1, repeats):  # rep -1 is the warm-up
            session = Session(name, estimator, seed, X[labeled], y[labeled])
            pool = pool0.copy()
            t0 = time.monotonic()
            for _ in range(n_queries):
                sel = session.query(X[pool], 1)
                chosen = pool[np.asarray(sel.indices)]
                session.teach(X[chosen], y[chosen])
                pool = np.delete(pool, np.asarray(sel.indices))
            elapsed = time.monotonic() - t0
            if rep >= 0:
                times.append(elapsed)
        times = np.asarray(times)
        std = float(times.std()) if len(times) > 1 else 0.0
        result.rows.append((name, float(times.mean()), std, repeats, n_queries))
    return result


def write_runtime_csv(path, result: RuntimeResult):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["strategy", "mean_s", "std_s", "repeats", "queries"])
        for name, mean_s, std_s, repeats, queries in result.rows:
            w.writerow([name, repr(mean_s), repr(std_s), repeats, queries])


def read_runtime_csv(path) -> RuntimeResult:
    result = RuntimeResult()
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    for row in rows[1:]:
        result.rows.append((row[0], float(row[1]), float(row[2]), int(row[3]), int(row[4])))
    return result
