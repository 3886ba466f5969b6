#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""随机森林：CART 分裂与暴力枚举对照、叶子规则、Bagging、投票、MDI 重要性、序列化。"""
import numpy as np
import pandas as pd
import pytest

from services.forest import (
    CLASSIFICATION,
    ForestConfig,
    ForestModel,
    Tree,
    best_split,
    bootstrap_sample,
    build_tree,
    fit_forest,
    forest_from_document,
    forest_to_document,
    importance_table,
    predict_classification,
    predict_classification_batch,
    predict_regression,
    predict_regression_batch,
    write_importance_csv,
)
from utils.errors import SerializationError, ValidationError


def _brute_force(x, y):
    """逐特征逐中点计算方差减少，返回 [(decrease, feature, threshold), ...]。"""
    n = y.size
    parent = np.var(y)
    out = []
    for f in range(x.shape[1]):
        values = np.unique(x[:, f])
        for a, b in zip(values[:-1], values[1:]):
            t = (a + b) / 2.0
            left, right = y[x[:, f] <= t], y[x[:, f] > t]
            dec = parent - (left.size * np.var(left) + right.size * np.var(right)) / n
            out.append((dec, f, t))
    return out


def _unbounded(n_estimators=1, seed=0):
    return ForestConfig(n_estimators=n_estimators, max_depth=None, min_samples_split=2,
                        max_features="all", bootstrap=False, seed=seed)


class TestBestSplit:
    def test_two_points(self):
        split = best_split(np.array([[0.0], [1.0]]), np.array([0.0, 1.0]))
        assert (split.feature, split.threshold) == (0, 0.5)
        assert split.impurity_decrease == pytest.approx(0.25, rel=1e-15)

    def test_constant_labels_no_split(self):
        x = np.random.default_rng(0).normal(size=(10, 3))
        assert best_split(x, np.full(10, 4.2)) is None

    def test_constant_features_no_split(self):
        x = np.ones((6, 2))
        assert best_split(x, np.arange(6, dtype=np.float64)) is None

    def test_matches_brute_force(self):
        rng = np.random.default_rng(123)
        for _ in range(100):
            n = int(rng.integers(2, 30))
            d = int(rng.integers(1, 5))
            x = rng.normal(size=(n, d))
            if rng.random() < 0.3:
                x = np.round(x, 1)
            y = rng.normal(size=n)
            split = best_split(x, y)
            candidates = _brute_force(x, y)
            best = max(c[0] for c in candidates) if candidates else 0.0
            if split is None:
                assert best <= 1e-12 * max(np.var(y), 1e-300)
                continue
            assert split.impurity_decrease == pytest.approx(best, rel=1e-9, abs=1e-12)
            near = [c for c in candidates if c[0] >= best - 1e-9 * np.var(y)]
            if len(near) == 1:
                assert (split.feature, split.threshold) == (near[0][1], near[0][2])

    def test_tie_prefers_lowest_feature_then_threshold(self):
        x = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
        y = np.array([0.0, 0.0, 1.0, 1.0])
        split = best_split(x, y)
        assert (split.feature, split.threshold) == (0, 1.5)
        y2 = np.array([0.0, 1.0, 0.0, 1.0])
        split2 = best_split(x[:, :1], y2)
        # 阈值 0.5 与 2.5 的下降量相同，取较小者
        assert split2.threshold == 0.5

    def test_candidate_subset(self):
        x = np.column_stack([np.arange(8.0), np.zeros(8)])
        y = np.arange(8.0)
        assert best_split(x, y, candidate_features=[1]) is None
        assert best_split(x, y, candidate_features=[0]).feature == 0

    def test_gini(self):
        x = np.array([[0.0], [1.0], [2.0], [3.0]])
        y = np.array([0.0, 0.0, 1.0, 1.0])
        split = best_split(x, y, criterion=CLASSIFICATION, n_classes=2)
        assert split.threshold == 1.5
        assert split.impurity_decrease == pytest.approx(0.5, rel=1e-15)


class TestBuildTree:
    def test_perfect_fit_on_distinct_features(self):
        rng = np.random.default_rng(1)
        x = rng.normal(size=(60, 3))
        y = rng.normal(size=60)
        tree = build_tree(x, y, None, 2, 3, np.random.default_rng(0))
        np.testing.assert_array_equal(tree.predict(x), y)

    def test_min_samples_split_gives_leaf(self):
        x = np.arange(5.0)[:, None]
        y = np.array([1.0, 2.0, 3.0, 4.0, 10.0])
        tree = build_tree(x, y, None, 6, 1, np.random.default_rng(0))
        assert tree.is_leaf_only
        np.testing.assert_allclose(tree.predict(x), 4.0)

    def test_max_depth(self):
        rng = np.random.default_rng(2)
        x = rng.normal(size=(200, 2))
        tree = build_tree(x, rng.normal(size=200), 3, 2, 2, np.random.default_rng(0))
        assert tree.depth() <= 3

    def test_constant_labels_leaf_value_exact(self):
        tree = build_tree(np.arange(4.0)[:, None], np.full(4, 0.1), None, 2, 1, np.random.default_rng(0))
        assert tree.is_leaf_only and tree.value[0] == 0.1

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            build_tree(np.zeros((0, 2)), np.zeros(0), None, 2, 2, np.random.default_rng(0))


class TestForestRegression:
    @pytest.fixture
    def data(self):
        rng = np.random.default_rng(7)
        x = rng.normal(size=(150, 4))
        y = np.sin(x[:, 0]) + 0.5 * x[:, 2] + 0.1 * rng.normal(size=150)
        return x, y

    def test_perfect_fit_without_bootstrap(self, data):
        x, y = data
        model = fit_forest(x, y, _unbounded(n_estimators=2))
        np.testing.assert_array_equal(predict_regression_batch(model, x), y)

    def test_predictions_within_label_range(self, data):
        x, y = data
        model = fit_forest(x, y, ForestConfig(n_estimators=10, max_depth=5, seed=3))
        queries = np.random.default_rng(8).normal(scale=5.0, size=(300, 4))
        pred = predict_regression_batch(model, queries)
        assert pred.min() >= y.min() - 1e-12 and pred.max() <= y.max() + 1e-12

    def test_perfect_fit_random_instances(self):
        rng = np.random.default_rng(21)
        for _ in range(20):
            x = rng.normal(size=(50, 3))
            y = rng.normal(size=50)
            model = fit_forest(x, y, _unbounded(seed=int(rng.integers(1000))))
            err = predict_regression_batch(model, x) - y
            assert float(np.mean(err * err)) == 0.0

    def test_random_forests_shift_range_and_seed(self):
        rng = np.random.default_rng(22)
        for _ in range(20):
            n, d = int(rng.integers(30, 81)), int(rng.integers(1, 5))
            x = rng.normal(size=(n, d))
            y = rng.normal(size=n)
            config = ForestConfig(n_estimators=int(rng.integers(1, 51)), max_depth=int(rng.integers(2, 7)),
                                  seed=int(rng.integers(1000)))
            model = fit_forest(x, y, config)
            base = predict_regression_batch(model, x)
            for k in (-3.0, 0.5, 10.0):
                shifted = predict_regression_batch(fit_forest(x, y + k, config), x)
                np.testing.assert_allclose(shifted, base + k, atol=1e-9)
            queries = rng.normal(scale=4.0, size=(100, d))
            pred = predict_regression_batch(model, queries)
            assert pred.min() >= y.min() - 1e-12 and pred.max() <= y.max() + 1e-12
            assert abs(model.feature_importances.sum() - 1.0) <= 1e-12
            again = fit_forest(x, y, config)
            np.testing.assert_array_equal(predict_regression_batch(again, queries), pred)
            np.testing.assert_array_equal(again.feature_importances, model.feature_importances)

    def test_single_matches_batch(self, data):
        x, y = data
        model = fit_forest(x, y, ForestConfig(n_estimators=5, max_depth=4, seed=3))
        assert predict_regression(model, x[10]) == pytest.approx(predict_regression_batch(model, x)[10], abs=1e-15)

    def test_importance_normalized(self, data):
        x, y = data
        model = fit_forest(x, y, ForestConfig(n_estimators=10, max_depth=6, seed=3))
        assert np.all(model.feature_importances >= 0)
        assert model.feature_importances.sum() == pytest.approx(1.0, abs=1e-12)

    def test_label_shift(self, data):
        x, y = data
        config = ForestConfig(n_estimators=6, max_depth=5, seed=4)
        base = predict_regression_batch(fit_forest(x, y, config), x)
        shifted = predict_regression_batch(fit_forest(x, y + 100.0, config), x)
        np.testing.assert_allclose(shifted, base + 100.0, atol=1e-9)

    def test_same_seed_identical_across_threads(self, data):
        x, y = data
        config = ForestConfig(n_estimators=8, max_depth=5, seed=9)
        a = predict_regression_batch(fit_forest(x, y, config, threads=1), x)
        b = predict_regression_batch(fit_forest(x, y, config, threads=4), x)
        np.testing.assert_array_equal(a, b)

    def test_dimension_mismatch(self, data):
        x, y = data
        model = fit_forest(x, y, ForestConfig(n_estimators=2, max_depth=2))
        with pytest.raises(ValidationError):
            predict_regression_batch(model, x[:, :3])

    def test_planted_feature_ranks_first(self):
        rng = np.random.default_rng(11)
        x = rng.normal(size=(300, 5))
        y = 3.0 * np.sign(x[:, 3]) + 0.05 * rng.normal(size=300)
        model = fit_forest(x, y, ForestConfig(n_estimators=20, max_depth=6, seed=1, max_features="all"),
                           feature_names=list("abcde"))
        assert importance_table(model)[0][0] == "d"
        assert model.feature_importances[3] > 0.8

    @pytest.mark.parametrize("kwargs", [{"n_estimators": 0}, {"max_depth": 0}, {"min_samples_split": 1},
                                        {"max_features": 0}, {"max_features": "sqrt"}, {"task": "ranking"}])
    def test_config_validation(self, kwargs):
        with pytest.raises(ValidationError):
            ForestConfig(**kwargs)

    def test_max_features_default(self):
        assert ForestConfig().resolve_max_features(62) == 21
        assert ForestConfig(task=CLASSIFICATION).resolve_max_features(10) == 4
        assert ForestConfig(max_features="all").resolve_max_features(7) == 7
        with pytest.raises(ValidationError):
            ForestConfig(max_features=9).resolve_max_features(4)


class TestBootstrap:
    def test_distinct_fraction(self):
        n = 20000
        x = np.arange(n, dtype=np.float64)[:, None]
        _, _, idx = bootstrap_sample(x, np.zeros(n), np.random.default_rng(0))
        assert len(idx) == n
        assert abs(len(np.unique(idx)) / n - (1 - np.exp(-1))) < 0.01

    def test_rows_follow_indices(self):
        x = np.arange(10, dtype=np.float64).reshape(5, 2)
        y = np.arange(5, dtype=np.float64)
        xb, yb, idx = bootstrap_sample(x, y, np.random.default_rng(3))
        np.testing.assert_array_equal(xb, x[idx])
        np.testing.assert_array_equal(yb, y[idx])

    def test_indices_kept_on_model(self):
        x = np.random.default_rng(0).normal(size=(30, 2))
        model = fit_forest(x, x[:, 0], ForestConfig(n_estimators=3, max_depth=3))
        assert len(model.bootstrap_indices) == 3
        assert fit_forest(x, x[:, 0], _unbounded()).bootstrap_indices is None


class TestClassification:
    def test_separable_classes(self):
        rng = np.random.default_rng(5)
        x = rng.uniform(0, 3, size=(120, 2))
        labels = np.array(["low", "mid", "high"])[np.floor(x[:, 0]).astype(int)]
        model = fit_forest(x, labels, ForestConfig(n_estimators=5, task=CLASSIFICATION, max_features="all",
                                                   bootstrap=False))
        np.testing.assert_array_equal(predict_classification_batch(model, x), labels)
        assert predict_classification(model, [2.5, 1.0]) == "high"

    def test_vote_tie_goes_to_lowest_class(self):
        trees = []
        for vote in (1.0, 0.0):
            tree = Tree()
            tree.add_node(1)
            tree.value[0] = vote
            trees.append(tree)
        model = ForestModel(trees=trees, config=ForestConfig(n_estimators=2, task=CLASSIFICATION), n_features=1,
                            feature_importances=np.zeros(1), feature_names=["x0"], classes=np.array([3, 8]))
        assert predict_classification(model, [0.0]) == 3

    def test_regression_model_rejects_classification(self):
        x = np.arange(6.0)[:, None]
        model = fit_forest(x, x[:, 0], _unbounded())
        with pytest.raises(ValidationError):
            predict_classification(model, [1.0])


class TestForestSerialization:
    def test_round_trip_predictions(self):
        rng = np.random.default_rng(6)
        x = rng.normal(size=(80, 3))
        model = fit_forest(x, x[:, 1] ** 2, ForestConfig(n_estimators=4, max_depth=5, seed=2),
                           feature_names=["a", "b", "c"])
        restored = forest_from_document(forest_to_document(model))
        queries = rng.normal(size=(50, 3))
        np.testing.assert_array_equal(predict_regression_batch(restored, queries),
                                      predict_regression_batch(model, queries))
        np.testing.assert_array_equal(restored.feature_importances, model.feature_importances)
        assert restored.feature_names == ["a", "b", "c"]
        assert restored.config == model.config

    def test_wrong_format(self):
        doc = forest_to_document(fit_forest(np.arange(4.0)[:, None], np.arange(4.0), _unbounded()))
        doc["format"] = "lstm-rf/lstm"
        with pytest.raises(SerializationError):
            forest_from_document(doc)

    def test_corrupt_child_index(self):
        doc = forest_to_document(fit_forest(np.arange(4.0)[:, None], np.arange(4.0), _unbounded()))
        doc["trees"][0][0]["left"] = 99
        with pytest.raises(SerializationError):
            forest_from_document(doc)

    @pytest.mark.parametrize("feature", [7, 1, -2])
    def test_split_feature_out_of_range(self, feature):
        doc = forest_to_document(fit_forest(np.arange(4.0)[:, None], np.arange(4.0), _unbounded()))
        assert doc["trees"][0][0]["feature"] == 0
        doc["trees"][0][0]["feature"] = feature
        with pytest.raises(SerializationError):
            forest_from_document(doc)

    def test_importance_length_mismatch(self):
        doc = forest_to_document(fit_forest(np.arange(4.0)[:, None], np.arange(4.0), _unbounded()))
        doc["n_features"] = 2
        with pytest.raises(SerializationError):
            forest_from_document(doc)

    def test_tree_without_nodes(self):
        doc = forest_to_document(fit_forest(np.arange(4.0)[:, None], np.arange(4.0), _unbounded()))
        doc["trees"][0] = []
        with pytest.raises(SerializationError):
            forest_from_document(doc)

    def test_importance_csv(self, tmp_path):
        x = np.random.default_rng(0).normal(size=(40, 2))
        model = fit_forest(x, x[:, 1], _unbounded(), feature_names=["salinity", "nitrite"])
        frame = pd.read_csv(write_importance_csv(model, tmp_path / "imp.csv"))
        assert list(frame.columns) == ["feature_name", "importance"]
        assert frame["feature_name"].iloc[0] == "nitrite"
        assert frame["importance"].sum() == pytest.approx(1.0)
