#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@File       : tuner.py
@Description: 两阶段穷举网格搜索。
              LSTM 阶段按测试集 Pearson 降序（可统一为 R²），RF 阶段按测试集 R² 降序；
              平分按参数字典序。出错的组合记为 FAILED 行，不丢弃。
              每个组合的子种子由 (主种子, 组合参数) 派生，新增网格取值不会改变已有行的结果。
"""
import hashlib
import itertools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from config.settings import SEED, TUNE_LSTM_GRID, TUNE_LSTM_OBJECTIVE, TUNE_RF_GRID, TUNE_RF_OBJECTIVE
from services.forest import ForestConfig, fit_forest, predict_regression_batch
from services.lstm_engine import FusionMode, LstmConfig, extract_features, forward_batch, train
from services.metrics import EvalReport, evaluate
from src.dataio import TimeSeries, denormalize, fit_normalizers, make_windows, split_ordered, train_count
from utils.errors import ForecastError, ValidationError
from utils.logger import get_logger
from utils.parallel import ordered_map

logger = get_logger(__name__)

LSTM_KEYS = ("hidden_size", "num_layers", "learning_rate", "sequence_len")
RF_KEYS = ("n_estimators", "max_depth", "min_samples_split")
OBJECTIVES = ("PEARSON", "R2")
STATUS_OK = "OK"
STATUS_FAILED = "FAILED"


@dataclass(frozen=True)
class GridSpec:
    lstm_grid: Mapping[str, Sequence] = field(default_factory=lambda: dict(TUNE_LSTM_GRID))
    rf_grid: Mapping[str, Sequence] = field(default_factory=lambda: dict(TUNE_RF_GRID))
    lstm_objective: str = TUNE_LSTM_OBJECTIVE
    rf_objective: str = TUNE_RF_OBJECTIVE
    seed: int = SEED

    def __post_init__(self):
        for name, grid, keys in (("lstm_grid", self.lstm_grid, LSTM_KEYS), ("rf_grid", self.rf_grid, RF_KEYS)):
            unknown = set(grid) - set(keys)
            missing = set(keys) - set(grid)
            if unknown or missing:
                raise ValidationError(f"tune.{name} 键不符: 缺少 {sorted(missing)}，未知 {sorted(unknown)}")
            for key in keys:
                if len(list(grid[key])) == 0:
                    raise ValidationError(f"tune.{name}.{key} 取值集合为空")
        for obj in (self.lstm_objective, self.rf_objective):
            if obj not in OBJECTIVES:
                raise ValidationError(f"目标指标必须为 {OBJECTIVES}，实际 {obj!r}")

    def lstm_combinations(self) -> List[Dict[str, Any]]:
        return _combinations(self.lstm_grid, LSTM_KEYS)

    def rf_combinations(self) -> List[Dict[str, Any]]:
        return _combinations(self.rf_grid, RF_KEYS)


def _combinations(grid: Mapping[str, Sequence], keys: Sequence[str]) -> List[Dict[str, Any]]:
    return [dict(zip(keys, values)) for values in itertools.product(*(list(grid[k]) for k in keys))]


def combination_seed(master_seed: int, params: Mapping[str, Any]) -> int:
    """由主种子与参数取值派生的 63 位子种子。"""
    key = f"{int(master_seed)}|" + json.dumps(dict(params), sort_keys=True)
    return int.from_bytes(hashlib.sha256(key.encode("utf-8")).digest()[:8], "big") >> 1


@dataclass
class GridRow:
    index: int
    params: Dict[str, Any]
    seed: int
    score: Optional[float] = None
    status: str = STATUS_OK
    message: str = ""
    metrics: Optional[EvalReport] = None


def _score(report: EvalReport, objective: str) -> Optional[float]:
    return report.pearson if objective == "PEARSON" else report.r2


def _param_sort_key(params: Mapping[str, Any], keys: Sequence[str]) -> Tuple:
    # None（不限深度）排在所有数值之前
    return tuple((0, 0.0) if params[k] is None else (1, float(params[k])) for k in keys)


def rank_rows(rows: List[GridRow], keys: Sequence[str]) -> List[GridRow]:
    ok = [r for r in rows if r.status == STATUS_OK]
    failed = [r for r in rows if r.status != STATUS_OK]
    ok.sort(key=lambda r: (-r.score, _param_sort_key(r.params, keys)))
    failed.sort(key=lambda r: r.index)
    return ok + failed


def _fit_lstm_combo(series, params, seed, epochs, train_fraction, fit_norm_on_train):
    window_len = int(params["sequence_len"])
    norm, exo_norm = fit_normalizers(series, window_len, train_fraction, fit_norm_on_train)
    dataset = make_windows(series, window_len, norm, exo_norm)
    train_set, test_set = split_ordered(dataset, train_fraction)
    config = LstmConfig(
        hidden_size=int(params["hidden_size"]),
        num_layers=int(params["num_layers"]),
        learning_rate=float(params["learning_rate"]),
        epochs=epochs,
        seed=seed,
    )
    return dataset, test_set, train(config, train_set)


def evaluate_lstm_combo(
    series: TimeSeries,
    params: Mapping[str, Any],
    seed: int,
    epochs: int,
    train_fraction: float,
    fit_norm_on_train: bool = False,
    objective: str = TUNE_LSTM_OBJECTIVE,
) -> Tuple[Optional[float], EvalReport]:
    """单个 LSTM 组合：窗口化 -> 有序划分 -> 训练 -> 测试集反标准化预测 -> 评分。"""
    dataset, test_set, result = _fit_lstm_combo(series, params, seed, epochs, train_fraction, fit_norm_on_train)
    pred_norm, _ = forward_batch(result.params, test_set.inputs)
    report = evaluate(test_set.labels_orig, denormalize(pred_norm, dataset.params))
    return _score(report, objective), report


def lstm_stage_features(
    series: TimeSeries,
    params: Mapping[str, Any],
    seed: int,
    epochs: int,
    train_fraction: float,
    fusion_mode: Union[str, FusionMode] = FusionMode.PRED,
    include_exogenous: bool = False,
    fit_norm_on_train: bool = False,
) -> Tuple[np.ndarray, np.ndarray]:
    """RF 阶段的输入：用选定的 LSTM 组合提取全部窗口的融合特征，标签为原始尺度。"""
    dataset, _, result = _fit_lstm_combo(series, params, seed, epochs, train_fraction, fit_norm_on_train)
    if include_exogenous and not dataset.has_exogenous:
        raise ValidationError("include_exogenous 需要外生变量列")
    features = extract_features(result.params, dataset, FusionMode.parse(fusion_mode), include_exogenous)
    return features, dataset.labels_orig


def evaluate_rf_combo(
    features: np.ndarray,
    labels: np.ndarray,
    params: Mapping[str, Any],
    seed: int,
    train_fraction: float,
    base: Optional[ForestConfig] = None,
    objective: str = TUNE_RF_OBJECTIVE,
) -> Tuple[Optional[float], EvalReport]:
    """单个 RF 组合：前 floor(fraction*n) 行训练，其余行评估。"""
    x = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64)
    n_train = train_count(len(y), train_fraction)
    if n_train == 0 or n_train == len(y):
        raise ValidationError(f"{len(y)} 个样本按 {train_fraction} 划分会得到空分区")
    base = base or ForestConfig()
    config = ForestConfig(
        n_estimators=int(params["n_estimators"]),
        max_depth=None if params["max_depth"] is None else int(params["max_depth"]),
        min_samples_split=int(params["min_samples_split"]),
        max_features=base.max_features,
        seed=seed,
        bootstrap=base.bootstrap,
    )
    forest = fit_forest(x[:n_train], y[:n_train], config)
    report = evaluate(y[n_train:], predict_regression_batch(forest, x[n_train:]))
    return _score(report, objective), report


def _run_grid(combos: List[Dict[str, Any]], master_seed: int, run_one, threads: int, stage: str) -> List[GridRow]:
    def job(item: Tuple[int, Dict[str, Any]]) -> GridRow:
        index, params = item
        row = GridRow(index=index, params=params, seed=combination_seed(master_seed, params))
        try:
            score, report = run_one(params, row.seed)
            row.metrics = report
            if score is None or not math.isfinite(score):
                row.status, row.message = STATUS_FAILED, "score undefined (constant predictions or actuals)"
            else:
                row.score = float(score)
        except ForecastError as e:
            row.status, row.message = STATUS_FAILED, e.message
            logger.warning("⚠️ %s 组合 %s 失败: %s", stage, params, e.message)
        except Exception as e:
            row.status, row.message = STATUS_FAILED, f"{type(e).__name__}: {e}"
            logger.exception("%s 组合 %s 异常", stage, params)
        return row

    return ordered_map(job, list(enumerate(combos)), threads)


def grid_search_lstm(
    series: TimeSeries,
    grid: GridSpec,
    epochs: int,
    train_fraction: float,
    fit_norm_on_train: bool = False,
    threads: int = 1,
) -> List[GridRow]:
    combos = grid.lstm_combinations()
    longest = max(int(c["sequence_len"]) for c in combos)
    if len(series) <= longest:
        raise ValidationError(f"序列长度 {len(series)} 不足以支持最大 sequence_len={longest}")
    logger.info("🔍 LSTM 网格搜索: %d 个组合, 目标 %s", len(combos), grid.lstm_objective)

    def run_one(params, seed):
        return evaluate_lstm_combo(series, params, seed, epochs, train_fraction, fit_norm_on_train,
                                   grid.lstm_objective)

    rows = _run_grid(combos, grid.seed, run_one, threads, "LSTM")
    return rank_rows(rows, LSTM_KEYS)


def grid_search_rf(
    features: np.ndarray,
    labels: np.ndarray,
    grid: GridSpec,
    train_fraction: float,
    base: Optional[ForestConfig] = None,
    threads: int = 1,
) -> List[GridRow]:
    combos = grid.rf_combinations()
    logger.info("🔍 RF 网格搜索: %d 个组合, 目标 %s", len(combos), grid.rf_objective)

    def run_one(params, seed):
        return evaluate_rf_combo(features, labels, params, seed, train_fraction, base, grid.rf_objective)

    rows = _run_grid(combos, grid.seed, run_one, threads, "RF")
    return rank_rows(rows, RF_KEYS)


def rows_to_frame(rows: List[GridRow], keys: Sequence[str]) -> pd.DataFrame:
    records = []
    for rank, row in enumerate(rows, 1):
        record = {"rank": rank}
        record.update({k: ("None" if row.params[k] is None else row.params[k]) for k in keys})
        record.update({"score": row.score, "status": row.status, "seed": row.seed, "message": row.message})
        records.append(record)
    return pd.DataFrame(records, columns=["rank", *keys, "score", "status", "seed", "message"])


def write_grid_csv(rows: List[GridRow], keys: Sequence[str], path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rows_to_frame(rows, keys).to_csv(path, index=False, float_format="%.17g", lineterminator="\n")
    return path
