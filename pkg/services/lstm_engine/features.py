#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@File       : features.py
@Description: 从训练好的 LSTM 提取供随机森林使用的特征。
              PRED: 标准化尺度的标量预测 (1 列)；HIDDEN: 顶层末步隐状态 (H 列)；
              SPLICE: [窗口值 x_t; h_t] (L + H 列)；include_exogenous 时在其后追加外生变量列。
"""
from enum import Enum
from typing import List, Sequence

import numpy as np

from services.lstm_engine.network import forward_batch
from services.lstm_engine.params import LstmParameters
from src.dataio.windows import WindowedDataset
from utils.errors import ValidationError


class FusionMode(str, Enum):
    PRED = "PRED"
    HIDDEN = "HIDDEN"
    SPLICE = "SPLICE"

    @classmethod
    def parse(cls, value) -> "FusionMode":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().upper())
        except ValueError:
            raise ValidationError(f"未知融合模式 {value!r}，可选 {[m.value for m in cls]}")


def feature_dimension(mode: FusionMode, window_len: int, hidden_size: int, exo_count: int = 0) -> int:
    base = {FusionMode.PRED: 1, FusionMode.HIDDEN: hidden_size, FusionMode.SPLICE: window_len + hidden_size}[mode]
    return base + exo_count


def feature_names(mode: FusionMode, window_len: int, hidden_size: int, exo_names: Sequence[str] = ()) -> List[str]:
    hidden = [f"h{j}" for j in range(hidden_size)]
    if mode is FusionMode.PRED:
        names = ["lstm_pred"]
    elif mode is FusionMode.HIDDEN:
        names = hidden
    else:
        names = [f"w{j}" for j in range(window_len)] + hidden
    return names + list(exo_names)


def extract_features(
    model: LstmParameters,
    windows: WindowedDataset,
    mode: FusionMode,
    include_exogenous: bool = False,
) -> np.ndarray:
    mode = FusionMode.parse(mode)
    if model.input_size != 1:
        raise ValidationError(f"窗口为单变量，模型 input_size={model.input_size}")
    predictions, trace = forward_batch(model, windows.inputs)
    if mode is FusionMode.PRED:
        blocks = [predictions[:, None]]
    elif mode is FusionMode.HIDDEN:
        blocks = [trace.final_hidden]
    else:
        blocks = [windows.inputs, trace.final_hidden]
    if include_exogenous:
        if not windows.has_exogenous:
            raise ValidationError("include_exogenous=True 但数据集没有外生变量列")
        blocks.append(windows.exo_rows)
    features = np.hstack(blocks)
    expected = feature_dimension(
        mode, windows.window_len, model.hidden_size, len(windows.exo_names) if include_exogenous else 0
    )
    if features.shape != (len(windows), expected):
        raise ValidationError(f"特征矩阵形状 {features.shape} 与预期 ({len(windows)}, {expected}) 不符")
    return features
