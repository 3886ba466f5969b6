#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""混合模型：分区计数、完美拟合、原始尺度、递归预测、基线对比、模型文件。"""
import json

import numpy as np
import pandas as pd
import pytest

from config.settings import EXO_COLUMNS
from main import main
from services.forest import ForestConfig
from services.hybrid_pipeline import (
    FusionConfig,
    exogenous_importance,
    fit_hybrid,
    forecast_recursive,
    hybrid_from_document,
    hybrid_to_document,
    load_model,
    predict_hybrid,
    predictions_frame,
    run_baselines,
    save_model,
    write_predictions_csv,
)
from services.lstm_engine import LstmConfig
from src.dataio import NormalizationParams, SynthParams, from_arrays, load_series, make_windows, write_synthetic_csv
from tests.conftest import PLANTED_DRIVER, sine_values
from utils.errors import SerializationError, UnsupportedModeError, ValidationError

PRED = FusionConfig.of("PRED")


def _exo_series(length=120):
    rng = np.random.default_rng(0)
    exo = {"temperature": rng.normal(size=length), "nitrite": rng.normal(size=length)}
    return from_arrays(sine_values(length), name="G2chla", exogenous=exo)


@pytest.fixture
def noisy_series():
    noise = np.random.default_rng(0).normal(scale=0.2, size=160)
    return from_arrays(sine_values() + noise, name="G2chla")


def _perfect_forest():
    return ForestConfig(n_estimators=1, max_depth=None, min_samples_split=2, max_features="all", bootstrap=False)


class TestFitHybrid:
    def test_partition_counts(self, small_forest):
        series = from_arrays(sine_values(400), name="G2chla")
        lstm = LstmConfig(hidden_size=3, epochs=2, seed=1)
        _, report = fit_hybrid(series, lstm, small_forest, PRED, 30, 0.8)
        assert (report.n_windows, report.n_train, report.n_test) == (370, 296, 74)
        assert len(report.loss_history) == 2

    @pytest.mark.parametrize("mode, dim", [("PRED", 1), ("HIDDEN", 4), ("SPLICE", 12 + 4)])
    def test_feature_dimension(self, sine_series, small_lstm, small_forest, mode, dim):
        model, report = fit_hybrid(sine_series, small_lstm, small_forest, FusionConfig.of(mode), 12, 0.8)
        assert model.forest.n_features == dim == report.feature_dim

    def test_exogenous_columns_appended(self, small_lstm, small_forest):
        model, _ = fit_hybrid(_exo_series(), small_lstm, small_forest, FusionConfig.of("PRED", True), 10, 0.8)
        assert model.forest.feature_names == ["lstm_pred", "temperature", "nitrite"]

    def test_exogenous_required(self, sine_series, small_lstm, small_forest):
        with pytest.raises(ValidationError):
            fit_hybrid(sine_series, small_lstm, small_forest, FusionConfig.of("PRED", True), 10, 0.8)

    def test_perfect_fit_on_training_windows(self, noisy_series, small_lstm):
        model, report = fit_hybrid(noisy_series, small_lstm, _perfect_forest(), PRED, 12, 0.8)
        np.testing.assert_array_equal(report.train_predictions, report.train.labels_orig)
        np.testing.assert_array_equal(predict_hybrid(model, report.train), report.train.labels_orig)
        assert report.train_metrics.mse == 0.0

    def test_predictions_within_training_labels(self, sine_series, small_lstm, small_forest):
        model, report = fit_hybrid(sine_series, small_lstm, small_forest, FusionConfig.of("SPLICE"), 12, 0.8)
        lo, hi = report.train.labels_orig.min(), report.train.labels_orig.max()
        queries = make_windows(from_arrays(np.random.default_rng(3).normal(2.0, 3.0, size=80)), 12, model.normalizer)
        pred = predict_hybrid(model, queries)
        assert pred.min() >= lo - 1e-12 and pred.max() <= hi + 1e-12

    def test_scale_equivariance(self, noisy_series, small_lstm, small_forest):
        _, base = fit_hybrid(noisy_series, small_lstm, small_forest, PRED, 12, 0.8)
        _, scaled = fit_hybrid(noisy_series.scaled(4.0, 0.0), small_lstm, small_forest, PRED, 12, 0.8)
        np.testing.assert_array_equal(scaled.test_predictions, 4.0 * base.test_predictions)

    def test_scale_and_shift_equivariance(self, noisy_series, small_lstm, small_forest):
        _, base = fit_hybrid(noisy_series, small_lstm, small_forest, PRED, 12, 0.8)
        _, moved = fit_hybrid(noisy_series.scaled(3.0, -7.5), small_lstm, small_forest, PRED, 12, 0.8)
        np.testing.assert_allclose(moved.test_predictions, 3.0 * base.test_predictions - 7.5, atol=1e-9)

    def test_deterministic(self, sine_series, small_lstm, small_forest):
        a, ra = fit_hybrid(sine_series, small_lstm, small_forest, FusionConfig.of("HIDDEN"), 12, 0.8)
        b, rb = fit_hybrid(sine_series, small_lstm, small_forest, FusionConfig.of("HIDDEN"), 12, 0.8, threads=3)
        assert hybrid_to_document(a) == hybrid_to_document(b)
        assert ra.to_dict() == rb.to_dict()

    def test_normalizer_mismatch(self, sine_series, small_lstm, small_forest):
        model, _ = fit_hybrid(sine_series, small_lstm, small_forest, PRED, 12, 0.8)
        other = make_windows(sine_series, 12, NormalizationParams(0.0, 1.0))
        with pytest.raises(ValidationError):
            predict_hybrid(model, other)

    def test_window_length_mismatch(self, sine_series, small_lstm, small_forest):
        model, _ = fit_hybrid(sine_series, small_lstm, small_forest, PRED, 12, 0.8)
        with pytest.raises(ValidationError):
            predict_hybrid(model, make_windows(sine_series, 11, model.normalizer))


class TestForecast:
    @pytest.fixture
    def model(self, sine_series, small_lstm, small_forest):
        return fit_hybrid(sine_series, small_lstm, small_forest, PRED, 12, 0.8)

    def test_horizon_one_equals_final_window(self, model, sine_series):
        fitted, _ = model
        extended = from_arrays(np.append(sine_series.target, 0.0))
        expected = predict_hybrid(fitted, make_windows(extended, fitted.window_len, fitted.normalizer))[-1]
        assert forecast_recursive(fitted, sine_series, 1)[0] == expected

    def test_horizon_within_bounds(self, model, sine_series):
        fitted, report = model
        out = forecast_recursive(fitted, sine_series.target[-20:], 5)
        assert out.shape == (5,)
        assert out.min() >= report.train.labels_orig.min() - 1e-12
        assert out.max() <= report.train.labels_orig.max() + 1e-12

    def test_near_constant_series(self, small_lstm, small_forest):
        values = 10.0 + 1e-3 * np.sin(np.arange(150) * 0.7)
        fitted, report = fit_hybrid(from_arrays(values), small_lstm, small_forest, PRED, 8, 0.8)
        out = forecast_recursive(fitted, values, 10)
        assert np.all(np.abs(out - 10.0) <= 1e-3 + 1e-12)

    def test_short_tail(self, model):
        with pytest.raises(ValidationError):
            forecast_recursive(model[0], np.ones(5), 1)

    @pytest.mark.parametrize("horizon", [0, -1, 2.5])
    def test_bad_horizon(self, model, sine_series, horizon):
        with pytest.raises(ValidationError):
            forecast_recursive(model[0], sine_series, horizon)

    def test_exogenous_mode_unsupported(self, small_lstm, small_forest):
        fitted, _ = fit_hybrid(_exo_series(), small_lstm, small_forest, FusionConfig.of("PRED", True), 10, 0.8)
        with pytest.raises(UnsupportedModeError):
            forecast_recursive(fitted, _exo_series(), 3)


class TestBaselines:
    def test_three_models_two_partitions(self, sine_series, small_lstm, small_forest):
        comparison = run_baselines(sine_series, small_lstm, small_forest, PRED, 12, 0.8)
        assert list(comparison.runs) == ["lstm_only", "rf_only", "hybrid"]
        doc = comparison.to_dict()
        for name in ("lstm_only", "rf_only", "hybrid"):
            for part in ("train", "test"):
                assert set(doc["models"][name][part]) >= {"mse", "mae", "r2", "pearson"}
        assert doc["partitions"] == {"train": 118, "test": 30}
        assert "rf_only" in doc["note"]
        assert len(comparison.runs["rf_only"].test_predictions) == 30

    def test_hybrid_row_matches_fit(self, sine_series, small_lstm, small_forest):
        comparison = run_baselines(sine_series, small_lstm, small_forest, PRED, 12, 0.8)
        _, report = fit_hybrid(sine_series, small_lstm, small_forest, PRED, 12, 0.8)
        np.testing.assert_array_equal(comparison.runs["hybrid"].test_predictions, report.test_predictions)

    def test_deterministic(self, sine_series, small_lstm, small_forest):
        a = run_baselines(sine_series, small_lstm, small_forest, PRED, 12, 0.8).to_dict()
        b = run_baselines(sine_series, small_lstm, small_forest, PRED, 12, 0.8).to_dict()
        assert a == b


class TestModelFile:
    def test_save_load_predicts_identically(self, tmp_path, sine_series, small_lstm, small_forest):
        model, report = fit_hybrid(sine_series, small_lstm, small_forest, FusionConfig.of("SPLICE"), 12, 0.8)
        path = save_model(model, tmp_path / "model.json")
        restored = load_model(path)
        np.testing.assert_array_equal(predict_hybrid(restored, report.test), predict_hybrid(model, report.test))
        assert restored.fusion == model.fusion
        assert restored.normalizer == model.normalizer
        assert restored.target_name == "G2chla"

    def test_exogenous_normalizers_round_trip(self, small_lstm, small_forest):
        model, _ = fit_hybrid(_exo_series(), small_lstm, small_forest, FusionConfig.of("HIDDEN", True), 10, 0.8)
        restored = hybrid_from_document(json.loads(json.dumps(hybrid_to_document(model))))
        assert restored.exo_names == ["temperature", "nitrite"]
        assert restored.exo_params == model.exo_params

    def test_feature_dim_mismatch(self, sine_series, small_lstm, small_forest):
        model, _ = fit_hybrid(sine_series, small_lstm, small_forest, PRED, 12, 0.8)
        doc = hybrid_to_document(model)
        doc["fusion"]["mode"] = "HIDDEN"
        with pytest.raises(SerializationError):
            hybrid_from_document(doc)

    def test_missing_section(self, sine_series, small_lstm, small_forest):
        model, _ = fit_hybrid(sine_series, small_lstm, small_forest, PRED, 12, 0.8)
        doc = hybrid_to_document(model)
        del doc["normalizer"]
        with pytest.raises(SerializationError):
            hybrid_from_document(doc)

    @pytest.mark.parametrize("key", ["feature_dim", "window_len", "exo_names"])
    def test_missing_scalar_field(self, key, sine_series, small_lstm, small_forest):
        model, _ = fit_hybrid(sine_series, small_lstm, small_forest, PRED, 12, 0.8)
        doc = hybrid_to_document(model)
        del doc[key]
        with pytest.raises(SerializationError):
            hybrid_from_document(doc)


class TestOutputs:
    def test_predictions_frame(self, tmp_path, sine_series, small_lstm, small_forest):
        _, report = fit_hybrid(sine_series, small_lstm, small_forest, PRED, 12, 0.8)
        frame = predictions_frame(report.train, report.test, report.train_predictions, report.test_predictions)
        assert list(frame.columns) == ["timestamp", "partition", "actual", "predicted"]
        assert (frame["partition"] == "train").sum() == report.n_train
        assert frame["timestamp"].iloc[0] == "2020-01-13"
        back = pd.read_csv(write_predictions_csv(frame, tmp_path / "p.csv"), float_precision="round_trip")
        np.testing.assert_array_equal(back["predicted"].to_numpy(), frame["predicted"].to_numpy())

    def test_exogenous_importance_finds_driver(self, planted_csv):
        series = load_series(planted_csv, "G2chla", "date", EXO_COLUMNS)
        forest = exogenous_importance(series, ForestConfig(n_estimators=20, max_depth=6, seed=3), 10, 0.8)
        assert forest.feature_names == list(EXO_COLUMNS)
        assert forest.feature_names[int(np.argmax(forest.feature_importances))] == PLANTED_DRIVER
        assert forest.feature_importances.sum() == pytest.approx(1.0, abs=1e-12)

    def test_exogenous_importance_requires_columns(self, sine_series, small_forest):
        with pytest.raises(ValidationError):
            exogenous_importance(sine_series, small_forest, 10, 0.8)


@pytest.mark.benchmark
class TestSyntheticBenchmark:
    """合成基准：阈值在固定生成器与种子下标定，默认不运行（pytest -m benchmark）。"""

    @pytest.fixture
    def series(self, tmp_path):
        return load_series(write_synthetic_csv(SynthParams(), tmp_path / "s.csv"), "G2chla", "date", EXO_COLUMNS)

    @pytest.fixture
    def comparison(self, series):
        forest = ForestConfig(n_estimators=100, seed=2025)
        return run_baselines(series, LstmConfig(seed=2025), forest, FusionConfig.of("PRED", True), 30, 0.8)

    def test_sine_hybrid_test_r2(self):
        series = from_arrays(sine_values(400), name="G2chla")
        forest = ForestConfig(n_estimators=100, seed=2025)
        _, report = fit_hybrid(series, LstmConfig(seed=2025), forest, PRED, 30, 0.8)
        assert (report.n_train, report.n_test) == (296, 74)
        assert report.test_metrics.r2 > 0.8

    def test_hybrid_test_r2(self, comparison):
        assert comparison.runs["hybrid"].test_metrics.r2 > 0.5

    def test_lstm_overfits(self, comparison):
        lstm = comparison.runs["lstm_only"]
        assert lstm.train_metrics.r2 - lstm.test_metrics.r2 > 0.2

    def test_test_r2_ordering(self, comparison):
        r2 = {name: run.test_metrics.r2 for name, run in comparison.runs.items()}
        assert r2["hybrid"] >= r2["rf_only"] >= r2["lstm_only"]

    def test_cli_compare_hybrid_beats_lstm(self, tmp_path):
        csv = tmp_path / "synthetic.csv"
        assert main(["synth", "--output", str(csv)]) == 0
        out = tmp_path / "compare"
        assert main(["compare", "--input", str(csv), "--output-dir", str(out),
                     "--set", "hybrid.include_exogenous=true"]) == 0
        doc = json.loads((out / "comparison.json").read_text(encoding="utf-8"))
        assert doc["models"]["hybrid"]["test"]["r2"] >= doc["models"]["lstm_only"]["test"]["r2"]
