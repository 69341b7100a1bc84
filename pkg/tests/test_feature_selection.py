import numpy as np
import pytest

from mlcore.core import classification_dataset
from mlcore.discriminant import fda_fit, golub_fit
from mlcore.errors import InvalidLists, TrainerError
from mlcore.feature_selection import (
    canberra_distance,
    canberra_expected,
    canberra_stability,
    irelief,
    kfda_rfe,
    rfe,
)
from mlcore.kernels import KernelSpec
from mlcore.rng import make_rng
from mlcore.svm import linear_weights, svc_train


def _golub_trainer(x, y):
    return golub_fit(classification_dataset(x, y))


def _svc_trainer(x, y):
    return linear_weights(svc_train(classification_dataset(x, y), KernelSpec("linear"), 1.0))


def _informative_noise_data(seed, n=40):
    gen = np.random.default_rng(seed)
    signal = np.concatenate([gen.normal(-2, 0.5, n // 2), gen.normal(2, 0.5, n // 2)])
    noise = gen.normal(0, 1.0, n)
    x = np.column_stack([signal, noise])
    y = np.array([0] * (n // 2) + [1] * (n // 2))
    return classification_dataset(x, y)


class TestRfe:
    def test_informative_feature_ranked_first(self):
        d = _informative_noise_data(0)
        ranking = rfe(_svc_trainer, d, step=1)
        assert ranking.order.tolist() == [0, 1]

    def test_constant_feature_eliminated_first(self):
        d0 = _informative_noise_data(1)
        x = np.column_stack([d0.x, np.full(d0.n, 3.0)])
        d = classification_dataset(x, d0.y)
        ranking = rfe(_golub_trainer, d, step=1)
        assert ranking.order.tolist()[-1] == 2  # constant has zero weight

    def test_matches_hand_simulation(self):
        d = _informative_noise_data(2)
        x = np.column_stack([d.x, np.random.default_rng(3).normal(size=d.n)])
        d3 = classification_dataset(x, d.y)

        # manual replay of 3 rounds of step-1 elimination with the same trainer
        remaining = [0, 1, 2]
        eliminated = []
        while len(remaining) > 1:
            w = _golub_trainer(d3.x[:, remaining], d3.y).weights
            scores = w**2
            drop = min(
                range(len(remaining)), key=lambda i: (scores[i], -remaining[i])
            )
            eliminated.append(remaining.pop(drop))
        expected = remaining + eliminated[::-1]

        ranking = rfe(_golub_trainer, d3, step=1)
        assert ranking.order.tolist() == expected

    def test_output_is_permutation(self):
        gen = np.random.default_rng(4)
        for trial in range(10):
            x = gen.normal(size=(30, 6))
            y = (x[:, trial % 6] > 0).astype(int)
            d = classification_dataset(x, y)
            order = rfe(_golub_trainer, d, step=2).order
            assert sorted(order.tolist()) == list(range(6))

    def test_step_p_minus_one_is_single_fit_sort(self):
        d = _informative_noise_data(5)
        x = np.column_stack([d.x, np.random.default_rng(6).normal(size=d.n)])
        d3 = classification_dataset(x, d.y)
        ranking = rfe(_golub_trainer, d3, step=2)
        w2 = _golub_trainer(d3.x, d3.y).weights ** 2
        expected = sorted(range(3), key=lambda j: (-w2[j], j))
        assert ranking.order.tolist() == expected

    def test_trainer_failure_carries_subset(self):
        def broken(x, y):
            raise ValueError("boom")

        d = _informative_noise_data(7)
        with pytest.raises(TrainerError) as exc:
            rfe(broken, d)
        assert exc.value.features == (0, 1)


class TestKfdaRfe:
    def test_constant_feature_dropped_first(self):
        d0 = _informative_noise_data(8)
        x = np.column_stack([d0.x, np.zeros(d0.n)])
        d = classification_dataset(x, d0.y)
        ranking = kfda_rfe(d, reg=1e-3, step=1, kernel=KernelSpec("linear"))
        assert ranking.order.tolist()[-1] == 2

    def test_linear_kernel_agrees_with_fda_weight_rfe(self):
        d = _informative_noise_data(9, n=30)

        def fda_trainer(x, y):
            m = fda_fit(classification_dataset(x, y), reg=1e-9)
            from mlcore.linear import LinearModel

            return LinearModel(m.direction, 0.0)

        primal = rfe(fda_trainer, d, step=1)
        dual = kfda_rfe(d, reg=1e-9, step=1, kernel=KernelSpec("linear"))
        assert primal.order.tolist() == dual.order.tolist()

    def test_single_feature_identity(self):
        x = np.random.default_rng(10).normal(size=(20, 1))
        y = (x[:, 0] > 0).astype(int)
        d = classification_dataset(x, y)
        assert kfda_rfe(d).order.tolist() == [0]


class TestIRelief:
    def test_exchangeable_features_equal_weights(self):
        gen = np.random.default_rng(11)
        n = 30
        y = np.array([0, 1] * (n // 2))
        shift = np.where(y == 1, 1.0, -1.0)
        x = np.column_stack([shift + 0.0, shift + 0.0])  # identical columns
        d = classification_dataset(x + 0.0, y)
        result = irelief(d, sigma=0.5)
        assert abs(result.weights[0] - result.weights[1]) < 1e-3

    def test_informative_beats_noise(self):
        gen = np.random.default_rng(12)
        n = 60
        y = np.array([0] * (n // 2) + [1] * (n // 2))
        informative = np.where(y == 1, 2.0, -2.0) + 0.2 * gen.normal(size=n)
        noise = gen.normal(size=n)
        d = classification_dataset(np.column_stack([informative, noise]), y)
        result = irelief(d, sigma=1.0)
        assert result.converged
        assert result.weights[0] > 5 * result.weights[1]

    def test_single_feature_weight_one(self):
        gen = np.random.default_rng(13)
        y = np.array([0, 1] * 10)
        x = (np.where(y == 1, 1.0, -1.0) + 0.1 * gen.normal(size=20)).reshape(-1, 1)
        result = irelief(classification_dataset(x, y), sigma=0.5)
        assert result.weights[0] == pytest.approx(1.0)

    def test_weights_nonnegative_unit_norm(self):
        gen = np.random.default_rng(14)
        x = gen.normal(size=(40, 5))
        y = (x[:, 0] + 0.5 * gen.normal(size=40) > 0).astype(int)
        result = irelief(classification_dataset(x, y), sigma=1.0)
        assert np.all(result.weights >= 0)
        assert np.linalg.norm(result.weights) == pytest.approx(1.0)

    def test_iteration_cap_flagged_not_raised(self):
        d = _informative_noise_data(15)
        result = irelief(d, sigma=0.5, max_iter=1, tol=0.0)
        assert not result.converged
        assert result.iterations == 1


class TestCanberra:
    def test_identical_lists_zero(self):
        lists = [[3, 1, 0, 2], [3, 1, 0, 2], [3, 1, 0, 2]]
        assert canberra_stability(lists) == 0.0

    def test_hand_computed_reversal(self):
        raw = canberra_stability([[0, 1, 2], [2, 1, 0]], normalize=False)
        assert raw == pytest.approx(1.0)
        assert canberra_distance([1, 2, 3], [3, 2, 1]) == pytest.approx(1.0)

    def test_expected_value_formula_matches_monte_carlo(self):
        p = 12
        gen = make_rng(99, "permutation")
        total = 0.0
        trials = 4000
        for _ in range(trials):
            r = gen.permutation(p) + 1
            s = gen.permutation(p) + 1
            total += canberra_distance(r, s)
        mc = total / trials
        assert canberra_expected(p) == pytest.approx(mc, rel=0.02)

    def test_random_permutations_normalize_to_one(self):
        gen = make_rng(4242, "permutation")
        p = 25
        lists = [gen.permutation(p) for _ in range(200)]
        value = canberra_stability(lists)
        assert abs(value - 1.0) < 0.05

    def test_relabeling_invariance(self):
        gen = make_rng(77, "permutation")
        p = 9
        lists = [gen.permutation(p) for _ in range(6)]
        relabel = gen.permutation(p)
        relabeled = [relabel[l] for l in lists]
        assert canberra_stability(relabeled) == pytest.approx(
            canberra_stability(lists), rel=1e-12
        )

    def test_top_k_truncation(self):
        # identical prefixes, scrambled tails: top-k distance must be 0
        a = [0, 1, 2, 3, 4, 5]
        b = [0, 1, 2, 5, 4, 3]
        assert canberra_stability([a, b], top_k=3) == 0.0
        assert canberra_stability([a, b]) > 0.0

    def test_prefix_lists_with_universe(self):
        a = [4, 0]
        b = [4, 1]
        value = canberra_stability([a, b], top_k=2, p=5, normalize=False)
        # rank vectors: a -> [2,3,3,3,1], b -> [3,2,3,3,1]
        expected = abs(2 - 3) / 5 + abs(3 - 2) / 5
        assert value == pytest.approx(expected)

    def test_mismatched_universe_rejected(self):
        with pytest.raises(InvalidLists):
            canberra_stability([[0, 1, 2], [0, 2, 1, 3]])
        with pytest.raises(InvalidLists):
            canberra_stability([[0, 1, 1]] * 2)
        with pytest.raises(InvalidLists):
            canberra_stability([[0, 1, 2]])
