#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@File       : windows.py
@Description: 滑动窗口样本与有序划分。
              第 i 个样本为标准化后的 x[i .. i+L-1]，标签为 x[i+L]（同时保存标准化与原始尺度）。
              外生变量取标签时刻 i+L 的值，按列各自标准化。
"""
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from src.dataio.normalizer import (
    NormalizationParams,
    apply_normalizer,
    fit_exogenous,
    fit_normalizer,
    fit_values,
)
from src.dataio.series import TimeSeries
from utils.errors import ValidationError
from utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class WindowedDataset:
    inputs: np.ndarray
    labels_norm: np.ndarray
    labels_orig: np.ndarray
    window_len: int
    params: NormalizationParams
    exo_rows: Optional[np.ndarray] = None
    exo_names: List[str] = field(default_factory=list)
    exo_params: Dict[str, NormalizationParams] = field(default_factory=dict)
    timestamps: Optional[np.ndarray] = None
    # 在完整窗口集合中的原始样本下标，划分后用于检查顺序与不重叠
    indices: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return int(self.inputs.shape[0])

    @property
    def num_samples(self) -> int:
        return len(self)

    @property
    def has_exogenous(self) -> bool:
        return self.exo_rows is not None and self.exo_rows.shape[1] > 0

    def take(self, rows: slice) -> "WindowedDataset":
        return replace(
            self,
            inputs=self.inputs[rows],
            labels_norm=self.labels_norm[rows],
            labels_orig=self.labels_orig[rows],
            exo_rows=None if self.exo_rows is None else self.exo_rows[rows],
            timestamps=None if self.timestamps is None else self.timestamps[rows],
            indices=None if self.indices is None else self.indices[rows],
        )


def train_count(num_samples: int, train_fraction: float) -> int:
    """floor(fraction * n)，与划分规则一致。"""
    return int(math.floor(train_fraction * num_samples))


def fit_normalizers(
    series: TimeSeries,
    window_len: int,
    train_fraction: float,
    on_train: bool = False,
) -> Tuple[NormalizationParams, Dict[str, NormalizationParams]]:
    """
    默认用全序列拟合（测试段统计量会进入标准化参数）；
    on_train=True 时只用训练样本涉及的行：前 n_train + L 行。
    """
    if not on_train:
        return fit_normalizer(series), fit_exogenous(series)
    n = len(series) - window_len
    if n < 1:
        raise ValidationError(f"序列长度 {len(series)} <= 窗口长度 {window_len}")
    rows = train_count(n, train_fraction) + window_len
    return fit_values(series.target[:rows], series.name), fit_exogenous(series, rows)


def make_windows(
    series: TimeSeries,
    window_len: int,
    params: NormalizationParams,
    exo_params: Optional[Dict[str, NormalizationParams]] = None,
) -> WindowedDataset:
    """T - L 个样本；T <= L 抛 ValidationError。"""
    total = len(series)
    if window_len < 1:
        raise ValidationError(f"窗口长度必须 >= 1，实际 {window_len}")
    if total <= window_len:
        raise ValidationError(f"序列长度 {total} <= 窗口长度 {window_len}，无法构造样本")

    normalized = apply_normalizer(series.target, params)
    n = total - window_len
    inputs = np.lib.stride_tricks.sliding_window_view(normalized, window_len)[:n].copy()
    labels_norm = normalized[window_len:].copy()
    labels_orig = series.target[window_len:].copy()

    exo_rows = None
    exo_names = series.exo_names
    if exo_names:
        if exo_params is None:
            exo_params = fit_exogenous(series)
        missing = [c for c in exo_names if c not in exo_params]
        if missing:
            raise ValidationError(f"缺少外生变量归一化参数: {missing}")
        exo_rows = np.column_stack(
            [apply_normalizer(series.exogenous[c][window_len:], exo_params[c]) for c in exo_names]
        )
    return WindowedDataset(
        inputs=inputs,
        labels_norm=labels_norm,
        labels_orig=labels_orig,
        window_len=window_len,
        params=params,
        exo_rows=exo_rows,
        exo_names=list(exo_names),
        exo_params=dict(exo_params or {}),
        timestamps=series.timestamps[window_len:],
        indices=np.arange(n),
    )


def split_ordered(dataset: WindowedDataset, train_fraction: float) -> Tuple[WindowedDataset, WindowedDataset]:
    """前 floor(fraction*n) 个样本为训练集，其余为测试集，不打乱。"""
    if not 0.0 < train_fraction < 1.0:
        raise ValidationError(f"train_fraction 必须在 (0, 1) 内，实际 {train_fraction}")
    n = len(dataset)
    if n == 0:
        raise ValidationError("数据集为空")
    n_train = train_count(n, train_fraction)
    if n_train == 0 or n_train == n:
        raise ValidationError(f"{n} 个样本按 {train_fraction} 划分会得到空的训练集或测试集")
    return dataset.take(slice(0, n_train)), dataset.take(slice(n_train, n))


def export_windows_csv(dataset: WindowedDataset, path) -> Path:
    """调试用导出：w0..w{L-1}, label_norm, label_orig。"""
    path = Path(path)
    frame = pd.DataFrame(dataset.inputs, columns=[f"w{i}" for i in range(dataset.window_len)])
    frame["label_norm"] = dataset.labels_norm
    frame["label_orig"] = dataset.labels_orig
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format="%.17g", lineterminator="\n")
    logger.info("💾 已导出 %d 个窗口样本 -> %s", len(dataset), path)
    return path
