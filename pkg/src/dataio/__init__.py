#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@Description: 数据接入层：CSV 读取、标准化、滑动窗口、有序划分、合成数据。
"""
from src.dataio.series import TimeSeries, from_arrays, load_series
from src.dataio.normalizer import (
    NormalizationParams,
    apply_normalizer,
    denormalize,
    fit_exogenous,
    fit_normalizer,
    fit_values,
)
from src.dataio.windows import (
    WindowedDataset,
    export_windows_csv,
    fit_normalizers,
    make_windows,
    split_ordered,
    train_count,
)
from src.dataio.synth import SynthParams, closed_form, generate_frame, nitrite_pulses, write_synthetic_csv

__all__ = [
    "TimeSeries", "from_arrays", "load_series",
    "NormalizationParams", "apply_normalizer", "denormalize", "fit_exogenous", "fit_normalizer", "fit_values",
    "WindowedDataset", "export_windows_csv", "fit_normalizers", "make_windows", "split_ordered", "train_count",
    "SynthParams", "closed_form", "generate_frame", "nitrite_pulses", "write_synthetic_csv",
]
