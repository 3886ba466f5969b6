#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@File       : conftest.py
@Description: 测试公共夹具：只输出到控制台的日志、合成序列、植入信号的 CSV、小规模配置。
"""
import os
import sys
from pathlib import Path

# 必须在导入项目模块之前设置
os.environ["LSTMRF_LOG_TO_FILE"] = "0"
os.environ.setdefault("LSTMRF_LOG_LEVEL", "WARNING")

_PROJECT_ROOT = Path(__file__).resolve().parent.parent
if str(_PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(_PROJECT_ROOT))

import numpy as np
import pandas as pd
import pytest

from config.settings import EXO_COLUMNS
from services.forest import ForestConfig
from services.lstm_engine import LstmConfig
from src.dataio import SynthParams, from_arrays, write_synthetic_csv

PLANTED_DRIVER = "nitrite"
PLANTED_NOISE = "salinity"


@pytest.fixture(autouse=True)
def _no_env_overrides(monkeypatch):
    """运行配置的环境变量覆盖在测试里一律关闭，个别用例自行设置。"""
    monkeypatch.delenv("LSTMRF_SEED", raising=False)
    monkeypatch.delenv("LSTMRF_THREADS", raising=False)


def sine_values(length: int = 160, period: float = 25.0) -> np.ndarray:
    t = np.arange(length, dtype=np.float64)
    return 2.0 + np.sin(2.0 * np.pi * t / period)


@pytest.fixture
def sine_series():
    return from_arrays(sine_values(), name="G2chla")


@pytest.fixture
def small_lstm():
    return LstmConfig(hidden_size=4, num_layers=1, learning_rate=0.05, epochs=15, seed=11)


@pytest.fixture
def small_forest():
    return ForestConfig(n_estimators=8, max_depth=6, min_samples_split=2, seed=5)


def write_planted_csv(path: Path, length: int = 240, seed: int = 0) -> Path:
    """nitrite 决定目标值，其余外生变量为独立噪声。"""
    rng = np.random.default_rng(seed)
    frame = pd.DataFrame({"date": pd.date_range("2021-01-01", periods=length, freq="D").strftime("%Y-%m-%d")})
    for name in EXO_COLUMNS:
        frame[name] = rng.normal(size=length)
    frame["G2chla"] = 5.0 + 3.0 * np.sign(frame[PLANTED_DRIVER]) + 0.5 * frame[PLANTED_DRIVER]
    frame.to_csv(path, index=False, float_format="%.17g")
    return path


@pytest.fixture
def planted_csv(tmp_path):
    return write_planted_csv(tmp_path / "planted.csv")


@pytest.fixture
def synth_csv(tmp_path):
    return write_synthetic_csv(SynthParams(length=120), tmp_path / "synthetic.csv")


@pytest.fixture
def tiny_run_args(tmp_path, synth_csv):
    """CLI 小规模运行参数：短训练、少量树。"""
    out = tmp_path / "out"
    return [
        "--input", str(synth_csv),
        "--output-dir", str(out),
        "--set", "data.window_len=10",
        "--set", "lstm.hidden_size=3",
        "--set", "lstm.epochs=5",
        "--set", "forest.n_estimators=4",
        "--set", "forest.max_depth=4",
    ]
