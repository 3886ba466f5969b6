#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@File       : hybrid_pipeline.py
@Description: LSTM -> RF 分阶段混合模型。
              流程：全序列标准化 -> 滑动窗口 -> 有序划分 -> LSTM 在 (训练窗口, 标准化标签) 上训练
              -> 用训练好的 LSTM 为全部窗口提取特征 -> RF 在 (训练特征, 原始尺度标签) 上训练。
              预测输出为原始尺度；多步预测为递归单步滚动。
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from services.forest import (
    ForestConfig,
    ForestModel,
    fit_forest,
    forest_from_document,
    forest_to_document,
    importance_table,
    predict_regression_batch,
)
from services.lstm_engine import (
    FusionMode,
    LstmConfig,
    LstmParameters,
    extract_features,
    feature_dimension,
    feature_names,
    forward_batch,
    lstm_from_document,
    lstm_to_document,
    train,
)
from services.metrics import EvalReport, evaluate
from src.dataio import (
    NormalizationParams,
    TimeSeries,
    WindowedDataset,
    apply_normalizer,
    denormalize,
    fit_normalizers,
    make_windows,
    split_ordered,
)
from utils.errors import ForecastError, SerializationError, UnsupportedModeError, ValidationError
from utils.logger import get_logger
from utils.serialization import (
    check_document,
    decode_float,
    dump_json,
    encode_float,
    load_json,
    make_document,
)

logger = get_logger(__name__)

HYBRID_FORMAT = "lstm-rf/hybrid"
RF_ONLY_NOTE = "rf_only: 随机森林直接以标准化窗口值 w0..w{L-1} 为特征、原始尺度标签训练"


@dataclass(frozen=True)
class FusionConfig:
    mode: FusionMode = FusionMode.PRED
    include_exogenous: bool = False

    @classmethod
    def of(cls, mode: Union[str, FusionMode], include_exogenous: bool = False) -> "FusionConfig":
        return cls(mode=FusionMode.parse(mode), include_exogenous=bool(include_exogenous))


@dataclass(frozen=True)
class HybridModel:
    lstm_config: LstmConfig
    lstm_params: LstmParameters
    forest: ForestModel
    fusion: FusionConfig
    normalizer: NormalizationParams
    window_len: int
    target_name: str = "target"
    exo_names: List[str] = field(default_factory=list)
    exo_params: Dict[str, NormalizationParams] = field(default_factory=dict)

    @property
    def feature_dim(self) -> int:
        exo = len(self.exo_names) if self.fusion.include_exogenous else 0
        return feature_dimension(self.fusion.mode, self.window_len, self.lstm_config.hidden_size, exo)


@dataclass
class HybridReport:
    loss_history: List[float]
    clip_events: int
    n_windows: int
    n_train: int
    n_test: int
    feature_dim: int
    train_metrics: EvalReport
    test_metrics: EvalReport
    train: WindowedDataset
    test: WindowedDataset
    train_predictions: np.ndarray
    test_predictions: np.ndarray

    def to_dict(self) -> Dict[str, Any]:
        return {
            "partitions": {"windows": self.n_windows, "train": self.n_train, "test": self.n_test},
            "feature_dim": self.feature_dim,
            "lstm": {
                "epochs": len(self.loss_history),
                "final_loss": self.loss_history[-1],
                "clip_events": self.clip_events,
                "loss_history": list(self.loss_history),
            },
            "metrics": {"train": self.train_metrics.to_dict(), "test": self.test_metrics.to_dict()},
        }


def _check_fusion(fusion: FusionConfig, dataset: WindowedDataset) -> None:
    if fusion.include_exogenous and not dataset.has_exogenous:
        raise ValidationError("融合模式要求外生变量 (include_exogenous)，但数据没有外生变量列")


def fit_hybrid(
    series: TimeSeries,
    lstm_config: LstmConfig,
    forest_config: ForestConfig,
    fusion: FusionConfig,
    window_len: int,
    train_fraction: float,
    fit_norm_on_train: bool = False,
    threads: int = 1,
) -> Tuple[HybridModel, HybridReport]:
    params, exo_params = fit_normalizers(series, window_len, train_fraction, fit_norm_on_train)
    dataset = make_windows(series, window_len, params, exo_params)
    train_set, test_set = split_ordered(dataset, train_fraction)
    _check_fusion(fusion, dataset)
    logger.info("🚀 混合模型训练: 窗口 %d (训练 %d / 测试 %d), L=%d, 融合 %s%s",
                len(dataset), len(train_set), len(test_set), window_len, fusion.mode.value,
                "+exo" if fusion.include_exogenous else "")

    lstm = train(lstm_config, train_set)
    features = extract_features(lstm.params, dataset, fusion.mode, fusion.include_exogenous)
    n_train = len(train_set)
    names = feature_names(fusion.mode, window_len, lstm_config.hidden_size,
                          dataset.exo_names if fusion.include_exogenous else ())
    forest = fit_forest(features[:n_train], train_set.labels_orig, forest_config, names, threads)

    model = HybridModel(
        lstm_config=lstm_config,
        lstm_params=lstm.params,
        forest=forest,
        fusion=fusion,
        normalizer=params,
        window_len=window_len,
        target_name=series.name,
        exo_names=list(dataset.exo_names),
        exo_params=dict(dataset.exo_params),
    )
    if forest.n_features != model.feature_dim or features.shape[1] != model.feature_dim:
        raise ForecastError(f"特征维度不一致: 森林 {forest.n_features}, 预期 {model.feature_dim}")

    predictions = predict_regression_batch(forest, features)
    train_pred, test_pred = predictions[:n_train], predictions[n_train:]
    report = HybridReport(
        loss_history=lstm.loss_history,
        clip_events=lstm.clip_events,
        n_windows=len(dataset),
        n_train=n_train,
        n_test=len(test_set),
        feature_dim=model.feature_dim,
        train_metrics=evaluate(train_set.labels_orig, train_pred),
        test_metrics=evaluate(test_set.labels_orig, test_pred),
        train=train_set,
        test=test_set,
        train_predictions=train_pred,
        test_predictions=test_pred,
    )
    logger.info("✅ 混合模型测试集 R2=%s MSE=%.6f", report.test_metrics.r2, report.test_metrics.mse)
    return model, report


def _features(model: HybridModel, windows: WindowedDataset) -> np.ndarray:
    features = extract_features(model.lstm_params, windows, model.fusion.mode, model.fusion.include_exogenous)
    if features.shape[1] != model.forest.n_features:
        raise ForecastError(f"特征维度 {features.shape[1]} 与森林输入维度 {model.forest.n_features} 不符")
    return features


def predict_hybrid(model: HybridModel, windows: WindowedDataset) -> np.ndarray:
    """窗口须用模型保存的归一化参数标准化（按指纹校验）；输出原始尺度。"""
    if windows.window_len != model.window_len:
        raise ValidationError(f"窗口长度 {windows.window_len} 与模型 {model.window_len} 不符")
    if windows.params.fingerprint() != model.normalizer.fingerprint():
        raise ValidationError("窗口的归一化参数与模型不一致")
    if model.fusion.include_exogenous:
        if list(windows.exo_names) != list(model.exo_names):
            raise ValidationError(f"外生变量列 {windows.exo_names} 与模型 {model.exo_names} 不符")
        for name in model.exo_names:
            if windows.exo_params[name].fingerprint() != model.exo_params[name].fingerprint():
                raise ValidationError(f"外生变量 {name} 的归一化参数与模型不一致")
    return predict_regression_batch(model.forest, _features(model, windows))


def forecast_recursive(
    model: HybridModel,
    tail: Union[TimeSeries, Sequence[float]],
    horizon: int,
) -> np.ndarray:
    """
    递归多步预测：每步预测一个值（原始尺度），把它的标准化值追加到窗口末尾并滑动。
    需要未来外生变量的融合模式不支持。
    """
    if model.fusion.include_exogenous:
        raise UnsupportedModeError("递归预测不支持包含外生变量的融合模式（未来外生变量未知）")
    if not isinstance(horizon, (int, np.integer)) or isinstance(horizon, bool) or horizon < 1:
        raise ValidationError(f"horizon 必须是 >= 1 的整数，实际 {horizon!r}")
    values = tail.target if isinstance(tail, TimeSeries) else np.asarray(tail, dtype=np.float64)
    if values.size < model.window_len:
        raise ValidationError(f"序列尾部长度 {values.size} < 窗口长度 {model.window_len}")
    window = apply_normalizer(values[-model.window_len:], model.normalizer)
    out = np.empty(horizon)
    for step in range(horizon):
        single = WindowedDataset(
            inputs=window[None, :],
            labels_norm=np.zeros(1),
            labels_orig=np.zeros(1),
            window_len=model.window_len,
            params=model.normalizer,
        )
        pred = float(predict_hybrid(model, single)[0])
        out[step] = pred
        window = np.append(window[1:], apply_normalizer([pred], model.normalizer))
    return out


@dataclass
class ModelRun:
    """单个模型在训练/测试分区上的预测与指标。"""

    train_predictions: np.ndarray
    test_predictions: np.ndarray
    train_metrics: EvalReport
    test_metrics: EvalReport


@dataclass
class ComparisonReport:
    runs: Dict[str, ModelRun]
    train: WindowedDataset
    test: WindowedDataset
    note: str = RF_ONLY_NOTE

    def metrics(self) -> Dict[str, Dict[str, EvalReport]]:
        return {name: {"train": r.train_metrics, "test": r.test_metrics} for name, r in self.runs.items()}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "note": self.note,
            "partitions": {"train": len(self.train), "test": len(self.test)},
            "models": {
                name: {"train": r.train_metrics.to_dict(), "test": r.test_metrics.to_dict()}
                for name, r in self.runs.items()
            },
        }


def run_baselines(
    series: TimeSeries,
    lstm_config: LstmConfig,
    forest_config: ForestConfig,
    fusion: FusionConfig,
    window_len: int,
    train_fraction: float,
    fit_norm_on_train: bool = False,
    threads: int = 1,
) -> ComparisonReport:
    """
    lstm_only: 混合模型内部的 LSTM（同配置同种子）预测反标准化；
    rf_only: 森林直接以标准化窗口值为特征；hybrid: fit_hybrid。三者在同一测试分区上评估。
    """
    model, report = fit_hybrid(series, lstm_config, forest_config, fusion, window_len, train_fraction,
                               fit_norm_on_train, threads)
    train_set, test_set = report.train, report.test

    def lstm_predict(ds: WindowedDataset) -> np.ndarray:
        pred_norm, _ = forward_batch(model.lstm_params, ds.inputs)
        return denormalize(pred_norm, model.normalizer)

    lstm_train, lstm_test = lstm_predict(train_set), lstm_predict(test_set)
    rf_names = [f"w{j}" for j in range(window_len)]
    rf = fit_forest(train_set.inputs, train_set.labels_orig, forest_config, rf_names, threads)
    rf_train = predict_regression_batch(rf, train_set.inputs)
    rf_test = predict_regression_batch(rf, test_set.inputs)

    def run(tr: np.ndarray, te: np.ndarray) -> ModelRun:
        return ModelRun(tr, te, evaluate(train_set.labels_orig, tr), evaluate(test_set.labels_orig, te))

    runs = {
        "lstm_only": run(lstm_train, lstm_test),
        "rf_only": run(rf_train, rf_test),
        "hybrid": run(report.train_predictions, report.test_predictions),
    }
    for name, r in runs.items():
        logger.info("📊 %s: 训练 R2=%s 测试 R2=%s", name, r.train_metrics.r2, r.test_metrics.r2)
    return ComparisonReport(runs=runs, train=train_set, test=test_set)


def _norm_to_doc(p: NormalizationParams) -> Dict[str, str]:
    return {"mu": encode_float(p.mu), "sigma": encode_float(p.sigma)}


def _norm_from_doc(doc: Dict[str, str]) -> NormalizationParams:
    return NormalizationParams(mu=decode_float(doc["mu"]), sigma=decode_float(doc["sigma"]))


def hybrid_to_document(model: HybridModel) -> Dict[str, Any]:
    return make_document(HYBRID_FORMAT, {
        "target_name": model.target_name,
        "window_len": model.window_len,
        "fusion": {"mode": model.fusion.mode.value, "include_exogenous": model.fusion.include_exogenous},
        "normalizer": _norm_to_doc(model.normalizer),
        "exo_names": list(model.exo_names),
        "exo_normalizers": {k: _norm_to_doc(model.exo_params[k]) for k in model.exo_names},
        "feature_dim": model.feature_dim,
        "lstm": lstm_to_document(model.lstm_config, model.lstm_params),
        "forest": forest_to_document(model.forest),
    })


def hybrid_from_document(doc: Dict[str, Any]) -> HybridModel:
    check_document(doc, HYBRID_FORMAT)
    try:
        lstm_config, lstm_params = lstm_from_document(doc["lstm"])
        forest = forest_from_document(doc["forest"])
        exo_names = list(doc["exo_names"])
        model = HybridModel(
            lstm_config=lstm_config,
            lstm_params=lstm_params,
            forest=forest,
            fusion=FusionConfig.of(doc["fusion"]["mode"], doc["fusion"]["include_exogenous"]),
            normalizer=_norm_from_doc(doc["normalizer"]),
            window_len=int(doc["window_len"]),
            target_name=str(doc["target_name"]),
            exo_names=exo_names,
            exo_params={k: _norm_from_doc(doc["exo_normalizers"][k]) for k in exo_names},
        )
        declared_dim = int(doc["feature_dim"])
    except SerializationError:
        raise
    except (KeyError, TypeError, ValueError, ValidationError) as e:
        raise SerializationError(f"混合模型文档损坏: {e}") from e
    if model.feature_dim != forest.n_features or declared_dim != forest.n_features:
        raise SerializationError("混合模型文档的特征维度与森林不一致")
    return model


def save_model(model: HybridModel, path) -> Path:
    return dump_json(hybrid_to_document(model), path)


def load_model(path) -> HybridModel:
    return hybrid_from_document(load_json(path))


def format_timestamps(stamps) -> List[str]:
    """全是零点时只写日期，否则写到秒。"""
    index = pd.DatetimeIndex(stamps)
    if (index == index.normalize()).all():
        return list(index.strftime("%Y-%m-%d"))
    return list(index.strftime("%Y-%m-%dT%H:%M:%S"))


def predictions_frame(
    train_set: WindowedDataset,
    test_set: WindowedDataset,
    train_predictions: Sequence[float],
    test_predictions: Sequence[float],
) -> pd.DataFrame:
    """(timestamp, partition, actual, predicted)，先训练分区后测试分区。"""
    parts = []
    for name, ds, pred in (("train", train_set, train_predictions), ("test", test_set, test_predictions)):
        stamps = format_timestamps(ds.timestamps) if ds.timestamps is not None else [""] * len(ds)
        parts.append(pd.DataFrame({
            "timestamp": stamps,
            "partition": name,
            "actual": ds.labels_orig,
            "predicted": np.asarray(pred, dtype=np.float64),
        }))
    return pd.concat(parts, ignore_index=True)


def write_predictions_csv(frame: pd.DataFrame, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format="%.17g", lineterminator="\n")
    return path


def exogenous_importance(
    series: TimeSeries,
    forest_config: ForestConfig,
    window_len: int,
    train_fraction: float,
    fit_norm_on_train: bool = False,
    threads: int = 1,
) -> ForestModel:
    """
    外生变量重要性：森林以标签时刻的标准化外生变量为特征、原始尺度标签为目标，
    只用训练分区拟合，重要性即 MDI。
    """
    if not series.exogenous:
        raise ValidationError("特征重要性需要外生变量列 (data.exo_columns 为空)")
    params, exo_params = fit_normalizers(series, window_len, train_fraction, fit_norm_on_train)
    dataset = make_windows(series, window_len, params, exo_params)
    train_set, _ = split_ordered(dataset, train_fraction)
    forest = fit_forest(train_set.exo_rows, train_set.labels_orig, forest_config, train_set.exo_names, threads)
    top_name, top_value = importance_table(forest)[0]
    logger.info("🔬 外生变量重要性: 最高 %s=%.4f", top_name, top_value)
    return forest
