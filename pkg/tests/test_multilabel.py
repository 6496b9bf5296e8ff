import numpy as np
import pytest

from activekit import ActiveLearner, ContractError, GaussianNB, LogisticOvr, QueryStrategy
from activekit.core import select_argmax
from activekit.multilabel import (
    STRATEGIES,
    avg_confidence,
    avg_score,
    max_loss,
    mean_max_loss,
    min_confidence,
    min_score,
    svm_binary_minimum,
)

NOOP = QueryStrategy(lambda l, p: None)


class StubOvr:
    """Fixed decision values with sigmoid probabilities, for hand fixtures."""

    probabilistic = True
    decision_scores = True
    regression = False
    classes_ = np.array([0, 1])
    multilabel_ = True

    def __init__(self, D):
        self.D = np.asarray(D, dtype=float)

    def fit(self, X, y):
        return self

    def predict(self, X):
        return (self.D >= 0).astype(int)

    def decision_values(self, X):
        return self.D

    def predict_proba(self, X):
        return 1.0 / (1.0 + np.exp(-self.D))


@pytest.fixture
def fixture_learner():
    # three instances, two labels; probabilities are sigmoids of the decisions
    D = np.array([[0.5, -2.0], [2.0, -3.0], [0.0, 5.0]])
    return ActiveLearner(StubOvr(D), NOOP, np.zeros((2, 1)), np.array([[0, 1], [1, 0]])), D


POOL3 = np.zeros((3, 1))


class TestHandFixture:
    def test_svm_binary_minimum(self, fixture_learner):
        lrn, _ = fixture_learner
        u = svm_binary_minimum(lrn, POOL3)
        assert u == pytest.approx([-0.5, -2.0, 0.0])
        assert select_argmax(u, 1)[0] == 2

    def test_max_loss(self, fixture_learner):
        lrn, _ = fixture_learner
        # most-probable labels per row: 0, 0, 1; hard predictions
        # (+1,-1), (+1,-1), (+1,+1) -> hinges 0, 0, 2
        u = max_loss(lrn, POOL3)
        assert u == pytest.approx([0.0, 0.0, 2.0])
        assert select_argmax(u, 1)[0] == 2

    def test_mean_max_loss(self, fixture_learner):
        lrn, _ = fixture_learner
        # both one-hot patterns average to 2 for every row; tie -> index 0
        u = mean_max_loss(lrn, POOL3)
        assert u == pytest.approx([2.0, 2.0, 2.0])
        assert select_argmax(u, 1)[0] == 0

    def test_min_confidence(self, fixture_learner):
        lrn, _ = fixture_learner
        sig = lambda d: 1 / (1 + np.exp(-d))
        expected = [-min(abs(2 * sig(0.5) - 1), abs(2 * sig(-2.0) - 1)),
                    -min(abs(2 * sig(2.0) - 1), abs(2 * sig(-3.0) - 1)),
                    0.0]
        u = min_confidence(lrn, POOL3)
        assert u == pytest.approx(expected, abs=1e-9)
        assert select_argmax(u, 1)[0] == 2

    def test_avg_confidence(self, fixture_learner):
        lrn, _ = fixture_learner
        sig = lambda d: 1 / (1 + np.exp(-d))
        expected = [-(abs(2 * sig(0.5) - 1) + abs(2 * sig(-2.0) - 1)) / 2,
                    -(abs(2 * sig(2.0) - 1) + abs(2 * sig(-3.0) - 1)) / 2,
                    -(0.0 + abs(2 * sig(5.0) - 1)) / 2]
        u = avg_confidence(lrn, POOL3)
        assert u == pytest.approx(expected, abs=1e-9)
        assert select_argmax(u, 1)[0] == 2

    def test_min_score(self, fixture_learner):
        lrn, _ = fixture_learner
        u = min_score(lrn, POOL3)
        assert u == pytest.approx([-0.5, -2.0, 0.0])
        assert select_argmax(u, 1)[0] == 2

    def test_avg_score(self, fixture_learner):
        lrn, _ = fixture_learner
        u = avg_score(lrn, POOL3)
        assert u == pytest.approx([-1.25, -2.5, -2.5])
        assert select_argmax(u, 1)[0] == 0


class TestProperties:
    def random_learner(self, seed, rows=10, labels=3):
        rng = np.random.default_rng(seed)
        D = rng.normal(size=(rows, labels))
        return ActiveLearner(StubOvr(D), NOOP, np.zeros((2, 1)),
                             np.array([[0, 1, 0], [1, 0, 1]])), D

    def test_min_score_matches_svm_binary_minimum(self):
        for seed in range(30):
            lrn, D = self.random_learner(seed)
            pool = np.zeros((D.shape[0], 1))
            a = min_score(lrn, pool)
            b = svm_binary_minimum(lrn, pool)
            assert np.argsort(a, kind="stable").tolist() == np.argsort(b, kind="stable").tolist()

    def test_row_permutation_equivariance(self):
        lrn, D = self.random_learner(1)
        perm = np.random.default_rng(2).permutation(D.shape[0])
        pool = np.zeros((D.shape[0], 1))
        lrn_p = ActiveLearner(StubOvr(D[perm]), NOOP, np.zeros((2, 1)),
                              np.array([[0, 1, 0], [1, 0, 1]]))
        for name, fn in STRATEGIES.items():
            assert np.allclose(fn(lrn_p, pool), fn(lrn, pool)[perm]), name

    def test_label_permutation_invariance(self):
        lrn, D = self.random_learner(3)
        pool = np.zeros((D.shape[0], 1))
        lrn_p = ActiveLearner(StubOvr(D[:, [2, 0, 1]]), NOOP, np.zeros((2, 1)),
                              np.array([[0, 1, 0], [1, 0, 1]]))
        for name, fn in STRATEGIES.items():
            assert np.allclose(fn(lrn_p, pool), fn(lrn, pool)), name

    def test_confidence_ranges(self):
        for seed in range(10):
            lrn, D = self.random_learner(seed, rows=50)
            pool = np.zeros((50, 1))
            for fn in (min_confidence, avg_confidence):
                u = fn(lrn, pool)
                assert (-1 - 1e-12 <= u).all() and (u <= 0).all()
            L = D.shape[1]
            for fn in (max_loss, mean_max_loss):
                u = fn(lrn, pool)
                assert (0 <= u).all() and (u <= 2 * L + 1e-12).all()

    def test_scaling_preserves_svm_bin_min_argmax(self):
        lrn, D = self.random_learner(4)
        pool = np.zeros((D.shape[0], 1))
        u1 = svm_binary_minimum(lrn, pool)
        lrn2 = ActiveLearner(StubOvr(2 * D), NOOP, np.zeros((2, 1)),
                             np.array([[0, 1, 0], [1, 0, 1]]))
        u2 = svm_binary_minimum(lrn2, pool)
        assert int(np.argmax(u1)) == int(np.argmax(u2))

    def test_requires_decision_scores(self):
        lrn = ActiveLearner(GaussianNB(), NOOP, [[0.0], [1.0]], [0, 1])
        with pytest.raises(ContractError):
            svm_binary_minimum(lrn, np.zeros((2, 1)))


class TestWithLogisticOvr:
    def test_end_to_end_multilabel(self):
        rng = np.random.default_rng(5)
        X = rng.normal(size=(40, 2))
        Y = np.column_stack([(X[:, 0] > 0).astype(int), (X[:, 1] > 0).astype(int)])
        lrn = ActiveLearner(LogisticOvr(epochs=200), NOOP, X, Y)
        pool = rng.normal(size=(25, 2))
        for name, fn in STRATEGIES.items():
            u = fn(lrn, pool)
            assert u.shape == (25,)
            assert np.isfinite(u).all(), name
        # the instance closest to both decision boundaries is most attractive
        # for svm_binary_minimum
        near = np.array([[0.0, 0.0]])
        far = np.array([[3.0, 3.0]])
        assert svm_binary_minimum(lrn, near)[0] > svm_binary_minimum(lrn, far)[0]
