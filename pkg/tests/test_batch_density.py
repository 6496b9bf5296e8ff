import numpy as np
import pytest

from activekit import ActiveLearner, GaussianNB, QueryStrategy
from activekit.batch_density import (
    density_weighted_utility,
    information_density,
    ranked_batch,
    similarity,
)
from activekit.uncertainty import classifier_uncertainty

NOOP = QueryStrategy(lambda l, p: None)


@pytest.fixture
def learner():
    rng = np.random.default_rng(0)
    X = np.vstack([rng.normal(-2, 1, (8, 2)), rng.normal(2, 1, (8, 2))])
    y = np.array([0] * 8 + [1] * 8)
    return ActiveLearner(GaussianNB(), NOOP, X, y)


class TestSimilarity:
    def test_identical_rows(self):
        assert similarity([1.0, 2.0], [1.0, 2.0]) == 1.0

    def test_orthogonal_cosine(self):
        assert similarity([1.0, 0.0], [0.0, 1.0], "cosine") == pytest.approx(0.0)

    def test_three_four_five(self):
        assert similarity([0.0, 0.0], [3.0, 4.0]) == pytest.approx(1 / 6)

    def test_zero_vector_cosine(self):
        assert similarity([0.0, 0.0], [1.0, 1.0], "cosine") == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            similarity([1.0], [1.0, 2.0])


class TestDensity:
    def test_identical_pool(self):
        pool = np.tile([1.0, 2.0], (5, 1))
        assert information_density(pool) == pytest.approx(np.ones(5))

    def test_single_row(self):
        assert information_density(np.array([[3.0, 4.0]])) == pytest.approx([1.0])

    def test_brute_force_double_loop(self):
        rng = np.random.default_rng(1)
        pool = rng.normal(size=(3, 2))
        expected = np.empty(3)
        for i in range(3):
            expected[i] = np.mean([similarity(pool[i], pool[j]) for j in range(3)])
        assert information_density(pool) == pytest.approx(expected)

    def test_permutation_equivariance(self):
        rng = np.random.default_rng(2)
        pool = rng.normal(size=(12, 3))
        perm = rng.permutation(12)
        assert np.allclose(information_density(pool)[perm], information_density(pool[perm]))

    def test_empty_pool(self):
        with pytest.raises(ValueError):
            information_density(np.empty((0, 2)))


class TestWeighting:
    def test_beta_zero_bit_identity(self):
        rng = np.random.default_rng(3)
        base = rng.random(20)
        density = rng.random(20)
        out = density_weighted_utility(base, density, 0.0)
        assert np.array_equal(out, base)

    def test_unit_density_neutral(self):
        base = np.array([0.4, 0.7])
        assert density_weighted_utility(base, np.ones(2), 1.0) == pytest.approx(base)

    def test_hand_arithmetic(self):
        out = density_weighted_utility([0.5, 0.2], [0.25, 1.0], 2.0)
        assert out == pytest.approx([0.03125, 0.2])

    def test_negative_density_fractional_beta(self):
        with pytest.raises(ValueError):
            density_weighted_utility([1.0], [-0.5], 0.5)


class TestRankedBatch:
    def test_first_pick_is_argmax_uncertainty_when_unlabeled(self, learner):
        rng = np.random.default_rng(4)
        pool = rng.normal(0, 2, (20, 2))
        sel = ranked_batch(learner, pool, None, 1)
        u = classifier_uncertainty(learner.predict_proba(pool))
        assert sel.indices[0] == int(np.argmax(u))

    def test_duplicate_penalized(self, learner):
        boundary = np.array([0.0, 0.0])
        pool = np.vstack([boundary, boundary, [[0.2, 0.0]]])
        sel = ranked_batch(learner, pool, learner.X_train, 2)
        assert sel.indices[0] == 0
        # hand evaluation of step 2: the duplicate's max similarity to the
        # labeled-so-far set (which now contains its twin) is exactly 1, so
        # its score collapses to (1-alpha)*U
        u = classifier_uncertainty(learner.predict_proba(pool))
        l = learner.X_train.shape[0] + 1
        alpha = 2 / (2 + l)
        dup_score = (1 - alpha) * u[1]
        phi2 = max(similarity(pool[2], row) for row in
                   np.vstack([learner.X_train, pool[0:1]]))
        other_score = alpha * (1 - phi2) + (1 - alpha) * u[2]
        assert sel.indices[1] == (1 if dup_score > other_score else 2)
        assert other_score > (1 - alpha) * u[2]  # diversity term really bites

    def test_matches_independent_step_oracle(self, learner):
        # re-derive the greedy selection with an explicit double loop
        rng = np.random.default_rng(5)
        pool = rng.normal(0, 2, (12, 2))
        u = classifier_uncertainty(learner.predict_proba(pool))
        labeled = [row for row in learner.X_train]
        remaining = list(range(12))
        expected = []
        for _ in range(6):
            uu, ll = len(remaining), len(labeled)
            alpha = uu / (uu + ll)
            best, best_key = None, None
            for i in remaining:
                phi = max(similarity(pool[i], b) for b in labeled)
                score = alpha * (1 - phi) + (1 - alpha) * u[i]
                key = (-score, -u[i], i)
                if best is None or key < best_key:
                    best, best_key = i, key
            expected.append(best)
            remaining.remove(best)
            labeled.append(pool[best])
        sel = ranked_batch(learner, pool, learner.X_train, 6)
        assert list(sel.indices) == expected

    def test_scores_bounded_and_distinct(self, learner):
        rng = np.random.default_rng(5)
        pool = rng.normal(0, 2, (30, 2))
        sel = ranked_batch(learner, pool, learner.X_train, 10)
        assert len(set(sel.indices.tolist())) == 10

    def test_large_labeled_set_pure_uncertainty(self, learner):
        rng = np.random.default_rng(6)
        # pool with well-separated uncertainty levels so the vanishing
        # diversity term cannot flip the ranking
        pool = np.column_stack([np.linspace(0.0, 0.8, 15), np.zeros(15)])
        u = classifier_uncertainty(learner.predict_proba(pool))
        assert np.min(np.abs(np.diff(np.sort(u)))) > 3e-3
        labeled = rng.normal(10, 0.1, (10_000, 2))  # huge l => alpha ~ 0
        sel = ranked_batch(learner, pool, labeled, 15)
        expected = sorted(range(15), key=lambda i: (-u[i], i))
        assert list(sel.indices) == expected

    def test_n_out_of_range(self, learner):
        with pytest.raises(ValueError):
            ranked_batch(learner, np.ones((3, 2)), None, 4)
