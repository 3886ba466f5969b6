#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@File       : series.py
@Description: 时间序列读取。
              CSV（带表头、UTF-8、逗号分隔，# 开头为注释行）→ 按日期排序、整行丢弃缺失值的 TimeSeries。
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from config.settings import DATE_FORMAT, MIN_VALID_ROWS
from utils.errors import DataIOError, ValidationError
from utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class TimeSeries:
    """目标变量 + 可选外生变量列，按日期非降序。"""

    timestamps: np.ndarray
    target: np.ndarray
    name: str
    exogenous: Dict[str, np.ndarray] = field(default_factory=dict)
    dropped_rows: int = 0
    duplicate_timestamps: int = 0

    def __post_init__(self):
        n = len(self.target)
        if n < 1:
            raise ValidationError("序列长度必须 >= 1")
        if len(self.timestamps) != n:
            raise ValidationError("timestamps 与 target 长度不一致")
        for col, values in self.exogenous.items():
            if len(values) != n:
                raise ValidationError(f"外生变量 {col} 长度 {len(values)} 与 target 长度 {n} 不一致")

    def __len__(self) -> int:
        return len(self.target)

    @property
    def exo_names(self) -> List[str]:
        return list(self.exogenous.keys())

    def exo_matrix(self) -> Optional[np.ndarray]:
        """(T, n_exo) 矩阵，列顺序与 exo_names 一致；无外生变量返回 None。"""
        if not self.exogenous:
            return None
        return np.column_stack([self.exogenous[c] for c in self.exo_names])

    def scaled(self, k: float, c: float) -> "TimeSeries":
        """target -> k*target + c，外生变量不变。"""
        return TimeSeries(
            timestamps=self.timestamps,
            target=self.target * k + c,
            name=self.name,
            exogenous=dict(self.exogenous),
        )

    def tail(self, n: int) -> "TimeSeries":
        return TimeSeries(
            timestamps=self.timestamps[-n:],
            target=self.target[-n:],
            name=self.name,
            exogenous={k: v[-n:] for k, v in self.exogenous.items()},
        )


def _parse_number(text) -> float:
    """float() 解析（正确舍入，%.17g 写出的值可原样读回）；空值、非数值、inf 记为 NaN。"""
    try:
        value = float(text)
    except (TypeError, ValueError):
        return np.nan
    return value if np.isfinite(value) else np.nan


def from_arrays(
    target: Sequence[float],
    name: str = "target",
    exogenous: Optional[Dict[str, Sequence[float]]] = None,
    start: str = "2020-01-01",
) -> TimeSeries:
    """由数组直接构造按日递增的序列（合成数据、测试用）。"""
    values = np.asarray(target, dtype=np.float64)
    stamps = pd.date_range(start=start, periods=len(values), freq="D").to_numpy()
    exo = {k: np.asarray(v, dtype=np.float64) for k, v in (exogenous or {}).items()}
    return TimeSeries(timestamps=stamps, target=values, name=name, exogenous=exo)


def load_series(
    path,
    target_column: str,
    date_column: str,
    exo_columns: Optional[Sequence[str]] = None,
) -> TimeSeries:
    """
    读取 CSV 并按日期排序。
    - 任一列缺失（空单元格或非数值）的行整行丢弃，丢弃数记录在 dropped_rows
    - 日期必须是 ISO-8601，否则抛 ValidationError
    - 重复日期保留（稳定排序），并记 warning
    """
    path = Path(path)
    exo_columns = list(exo_columns or [])
    if not path.is_file():
        raise DataIOError(f"输入文件不存在: {path}")
    try:
        frame = pd.read_csv(path, comment="#", encoding="utf-8", dtype=str, keep_default_na=False)
    except (OSError, UnicodeDecodeError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise DataIOError(f"读取 CSV 失败 {path}: {e}") from e

    wanted = [date_column, target_column] + exo_columns
    missing = [c for c in wanted if c not in frame.columns]
    if missing:
        raise ValidationError(f"未知列名 {missing}，可用列: {list(frame.columns)}")
    if len(set(wanted)) != len(wanted):
        raise ValidationError(f"列名重复: {wanted}")

    frame = frame[wanted].apply(lambda s: s.str.strip())
    frame = frame.replace("", np.nan)
    numeric = frame[[target_column] + exo_columns].apply(lambda s: s.map(_parse_number))
    dates_raw = frame[date_column]
    valid_mask = numeric.notna().all(axis=1) & dates_raw.notna()
    dropped = int((~valid_mask).sum())
    if dropped:
        logger.warning("⚠️ %s: 丢弃 %d 行含缺失值的记录", path.name, dropped)
    numeric = numeric[valid_mask]
    dates_raw = dates_raw[valid_mask]
    if len(numeric) < MIN_VALID_ROWS:
        raise ValidationError(f"{path.name}: 有效行数 {len(numeric)} < {MIN_VALID_ROWS}")

    try:
        dates = pd.to_datetime(dates_raw, format=DATE_FORMAT)
    except (ValueError, TypeError) as e:
        raise ValidationError(f"{path.name}: 日期格式无法解析（需 ISO-8601）: {e}") from e
    if dates.isna().any():
        raise ValidationError(f"{path.name}: 日期格式无法解析（需 ISO-8601）")

    order = np.argsort(dates.to_numpy(), kind="stable")
    stamps = dates.to_numpy()[order]
    duplicates = int(pd.Index(stamps).duplicated().sum())
    if duplicates:
        logger.warning("⚠️ %s: 存在 %d 个重复日期，按原文件顺序保留", path.name, duplicates)

    target = numeric[target_column].to_numpy(dtype=np.float64)[order]
    exo = {c: numeric[c].to_numpy(dtype=np.float64)[order] for c in exo_columns}
    logger.info("📂 已读取 %s: %d 行, 目标列 %s, 外生变量 %d 列", path.name, len(target), target_column, len(exo))
    return TimeSeries(
        timestamps=stamps,
        target=target,
        name=target_column,
        exogenous=exo,
        dropped_rows=dropped,
        duplicate_timestamps=duplicates,
    )
