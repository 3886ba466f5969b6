#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@File       : metrics.py
@Description: 评估指标 MSE、MAE、RMSE、R²、Pearson。
              求和用 math.fsum（精确舍入求和）；R² 中 ȳ 为被评估分区实际值的均值。
              实际值为常数时 r2 为 None，任一序列为常数时 pearson 为 None（UNDEFINED，不是 0）。
"""
import math
from dataclasses import asdict, dataclass
from typing import Dict, List, Mapping, Optional, Sequence

import numpy as np

from utils.errors import ValidationError

METRIC_KEYS = ("mse", "mae", "r2", "pearson")


@dataclass(frozen=True)
class EvalReport:
    mse: float
    mae: float
    rmse: float
    r2: Optional[float]
    pearson: Optional[float]
    n: int

    def to_dict(self) -> Dict[str, Optional[float]]:
        return asdict(self)


def _mean(values: np.ndarray) -> float:
    return math.fsum(values) / values.size


def evaluate(actual: Sequence[float], predicted: Sequence[float]) -> EvalReport:
    y = np.asarray(actual, dtype=np.float64).ravel()
    p = np.asarray(predicted, dtype=np.float64).ravel()
    if y.size != p.size:
        raise ValidationError(f"actual 长度 {y.size} 与 predicted 长度 {p.size} 不一致")
    if y.size == 0:
        raise ValidationError("evaluate 输入为空")
    n = y.size
    err = y - p
    mse = math.fsum(err * err) / n
    mae = math.fsum(np.abs(err)) / n
    rmse = math.sqrt(mse)

    r2 = None
    pearson = None
    if n >= 2:
        y_dev = y - _mean(y)
        p_dev = p - _mean(p)
        ss_tot = math.fsum(y_dev * y_dev)
        ss_pred = math.fsum(p_dev * p_dev)
        if ss_tot > 0:
            r2 = 1.0 - mse * n / ss_tot
            # 有误差时 r2 严格小于 1
            if mse > 0 and r2 >= 1.0:
                r2 = float(np.nextafter(1.0, 0.0))
        if ss_tot > 0 and ss_pred > 0:
            rho = math.fsum(y_dev * p_dev) / math.sqrt(ss_tot * ss_pred)
            pearson = max(-1.0, min(1.0, rho))
    return EvalReport(mse=mse, mae=mae, rmse=rmse, r2=r2, pearson=pearson, n=n)


def _fmt(value: Optional[float]) -> str:
    return "UNDEFINED" if value is None else f"{value:.6f}"


def render_table(reports: Mapping[str, Mapping[str, EvalReport]]) -> str:
    """
    对齐的文本表：每行一个 (模型, 分区)，列为 MSE / MAE / R² / Pearson。
    reports 形如 {"hybrid": {"train": EvalReport, "test": EvalReport}, ...}
    """
    header = ["model", "partition", "MSE", "MAE", "R2", "Pearson"]
    rows: List[List[str]] = []
    for model, parts in reports.items():
        for partition, rep in parts.items():
            rows.append([model, partition, _fmt(rep.mse), _fmt(rep.mae), _fmt(rep.r2), _fmt(rep.pearson)])
    widths = [max(len(r[k]) for r in rows + [header]) for k in range(len(header))]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
    lines.append("  ".join("-" * w for w in widths))
    for r in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)))
    return "\n".join(lines)


def report_from_dict(doc: Mapping[str, Optional[float]]) -> EvalReport:
    return EvalReport(
        mse=float(doc["mse"]), mae=float(doc["mae"]), rmse=float(doc["rmse"]),
        r2=None if doc.get("r2") is None else float(doc["r2"]),
        pearson=None if doc.get("pearson") is None else float(doc["pearson"]),
        n=int(doc["n"]),
    )
