#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@File       : synth.py
@Description: 合成数据生成器（测试夹具 / 无真实海洋数据时的替代）。
              季节性基线 + 外生变量的非线性耦合 + 后段变密的营养盐脉冲 + 种子噪声，参数与闭式写在 CSV 头部注释里。
"""
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Dict

import numpy as np
import pandas as pd

from config.settings import (
    DATE_COLUMN,
    SYNTH_LENGTH,
    SYNTH_NOISE,
    SYNTH_PULSE_RATE,
    SYNTH_PERIOD,
    SYNTH_SEED,
    SYNTH_START_DATE,
    SYNTH_SURGE_RATE,
    SYNTH_SURGE_START,
    TARGET_COLUMN,
)
from utils.errors import ValidationError
from utils.logger import get_logger

logger = get_logger(__name__)

FORMULA_LINES = [
    "t = 0..length-1, P = period, w(p) = 2*pi*t/p",
    "temperature = 18 + 6*sin(w(P))",
    "salinity = 33 + 0.8*cos(w(P) + 0.5)",
    "dissolved_oxygen = 7 - 0.12*(temperature - 18) + 0.3*sin(w(P/2.3))",
    "pulse = 0.4*s*u*b, s=+-1, u~U(0.5,1), b~Bernoulli(pulse_rate if t < surge_start*length else surge_rate), "
    "rng=default_rng([seed, 0])",
    "nitrite = 0.5 + 0.1*sin(w(17) + 1.0) + pulse",
    "pressure = 10 + 2*sin(w(29) + 0.3)",
    "G2chla = 2 + 0.8*sin(w(P)) + 0.5*tanh(pressure - 10) + 5*(nitrite - 0.5) + noise*N(0,1), "
    "N from default_rng([seed, 1])",
]


@dataclass(frozen=True)
class SynthParams:
    length: int = SYNTH_LENGTH
    period: float = SYNTH_PERIOD
    noise: float = SYNTH_NOISE
    seed: int = SYNTH_SEED
    start_date: str = SYNTH_START_DATE
    pulse_rate: float = SYNTH_PULSE_RATE
    surge_rate: float = SYNTH_SURGE_RATE
    surge_start: float = SYNTH_SURGE_START

    def validate(self) -> "SynthParams":
        if self.length < 2:
            raise ValidationError(f"length 必须 >= 2，实际 {self.length}")
        if self.period <= 0:
            raise ValidationError(f"period 必须 > 0，实际 {self.period}")
        if self.noise < 0:
            raise ValidationError(f"noise 必须 >= 0，实际 {self.noise}")
        for name in ("pulse_rate", "surge_rate", "surge_start"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValidationError(f"{name} 必须在 [0, 1] 内，实际 {value}")
        return self


def nitrite_pulses(params: SynthParams) -> np.ndarray:
    """随机营养盐脉冲：符号、幅度、是否发生都来自 default_rng([seed, 0])，与噪声流独立。"""
    rng = np.random.default_rng([params.seed, 0])
    n = params.length
    rate = np.where(np.arange(n) < int(params.surge_start * n), params.pulse_rate, params.surge_rate)
    occurs = rng.random(n) < rate
    sign = np.where(rng.random(n) < 0.5, -1.0, 1.0)
    magnitude = rng.uniform(0.5, 1.0, n)
    return np.where(occurs, 0.4 * sign * magnitude, 0.0)


def closed_form(params: SynthParams) -> Dict[str, np.ndarray]:
    """无观测噪声的信号，各列按 FORMULA_LINES 计算；脉冲由种子决定。"""
    t = np.arange(params.length, dtype=np.float64)
    period = params.period

    def w(p: float) -> np.ndarray:
        return 2.0 * np.pi * t / p

    temperature = 18.0 + 6.0 * np.sin(w(period))
    salinity = 33.0 + 0.8 * np.cos(w(period) + 0.5)
    dissolved_oxygen = 7.0 - 0.12 * (temperature - 18.0) + 0.3 * np.sin(w(period / 2.3))
    nitrite = 0.5 + 0.1 * np.sin(w(17.0) + 1.0) + nitrite_pulses(params)
    pressure = 10.0 + 2.0 * np.sin(w(29.0) + 0.3)
    target = 2.0 + 0.8 * np.sin(w(period)) + 0.5 * np.tanh(pressure - 10.0) + 5.0 * (nitrite - 0.5)
    return {
        TARGET_COLUMN: target,
        "temperature": temperature,
        "salinity": salinity,
        "dissolved_oxygen": dissolved_oxygen,
        "nitrite": nitrite,
        "pressure": pressure,
    }


def generate_frame(params: SynthParams) -> pd.DataFrame:
    params.validate()
    columns = closed_form(params)
    rng = np.random.default_rng([params.seed, 1])
    columns[TARGET_COLUMN] = columns[TARGET_COLUMN] + params.noise * rng.standard_normal(params.length)
    dates = pd.date_range(start=params.start_date, periods=params.length, freq="D").strftime("%Y-%m-%d")
    frame = pd.DataFrame({DATE_COLUMN: dates})
    for name, values in columns.items():
        frame[name] = values
    return frame


def write_synthetic_csv(params: SynthParams, path) -> Path:
    """写 CSV：# 注释头（参数 + 闭式）后接数据，同参数同种子字节一致。"""
    path = Path(path)
    frame = generate_frame(params)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = [f"# {k}={v}" for k, v in asdict(params).items()] + [f"# {line}" for line in FORMULA_LINES]
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("\n".join(header) + "\n")
        frame.to_csv(f, index=False, float_format="%.17g", lineterminator="\n")
    logger.info("🧪 已生成合成数据 %d 行 -> %s", params.length, path)
    return path
