#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@File       : normalizer.py
@Description: z-score 标准化：(v - mu) / sigma，sigma 为总体标准差（除以 N）。
"""
from dataclasses import dataclass
from typing import Dict, Sequence, Union

import numpy as np

from src.dataio.series import TimeSeries
from utils.errors import ValidationError


@dataclass(frozen=True)
class NormalizationParams:
    mu: float
    sigma: float

    def __post_init__(self):
        if not (np.isfinite(self.mu) and np.isfinite(self.sigma)):
            raise ValidationError("归一化参数必须为有限值")
        if self.sigma <= 0:
            raise ValidationError(f"sigma 必须 > 0，实际 {self.sigma}")

    def fingerprint(self) -> str:
        """mu/sigma 的精确指纹，用于检测预测时归一化参数是否与训练一致。"""
        return f"{float(self.mu).hex()}:{float(self.sigma).hex()}"


def fit_values(values: Sequence[float], name: str = "target") -> NormalizationParams:
    arr = np.asarray(values, dtype=np.float64)
    if arr.size < 2:
        raise ValidationError(f"{name}: 拟合归一化至少需要 2 个值")
    mu = float(np.mean(arr))
    sigma = float(np.std(arr, ddof=0))
    if sigma == 0.0:
        raise ValidationError(f"{name}: 序列为常数（方差为 0），无法标准化")
    return NormalizationParams(mu=mu, sigma=sigma)


def fit_normalizer(series: Union[TimeSeries, Sequence[float]]) -> NormalizationParams:
    """全样本均值与总体标准差。"""
    if isinstance(series, TimeSeries):
        return fit_values(series.target, series.name)
    return fit_values(series)


def fit_exogenous(series: TimeSeries, rows: int = -1) -> Dict[str, NormalizationParams]:
    """每个外生变量列单独拟合；rows>0 时只用前 rows 行。"""
    out = {}
    for col, values in series.exogenous.items():
        sample = values if rows <= 0 else values[:rows]
        out[col] = fit_values(sample, col)
    return out


def apply_normalizer(values: Sequence[float], params: NormalizationParams) -> np.ndarray:
    return (np.asarray(values, dtype=np.float64) - params.mu) / params.sigma


def denormalize(values: Sequence[float], params: NormalizationParams) -> np.ndarray:
    return np.asarray(values, dtype=np.float64) * params.sigma + params.mu
