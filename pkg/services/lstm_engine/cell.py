#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@File       : cell.py
@Description: LSTM 记忆单元单步前向。
              f = σ(W_f·[h,x]+b_f)，i = σ(W_i·[h,x]+b_i)，c̃ = tanh(W_c·[h,x]+b_c)，
              c = f·c_prev + i·c̃，o = σ(W_o·[h,x]+b_o)，h = o·tanh(c)。
              支持单样本 (D,) 与批量 (N, D) 输入。
"""
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from utils.errors import DivergenceError


def sigmoid(z):
    # tanh 形式在大 |z| 时不溢出
    return 0.5 * (1.0 + np.tanh(0.5 * z))


@dataclass(frozen=True)
class LstmState:
    hidden: np.ndarray
    cell: np.ndarray

    @classmethod
    def zeros(cls, hidden_size: int, batch: int = 0) -> "LstmState":
        shape = (batch, hidden_size) if batch else (hidden_size,)
        return cls(hidden=np.zeros(shape), cell=np.zeros(shape))


@dataclass(frozen=True)
class GateCache:
    """反向传播所需的单步缓存。"""

    z: np.ndarray       # [h_{t-1}, x_t]
    f: np.ndarray
    i: np.ndarray
    g: np.ndarray       # 候选记忆 c̃
    o: np.ndarray
    c_prev: np.ndarray
    c: np.ndarray
    tanh_c: np.ndarray


def cell_step(layer: Dict[str, np.ndarray], x: np.ndarray, prev: LstmState) -> Tuple[LstmState, GateCache]:
    z = np.concatenate([prev.hidden, x], axis=-1)
    f = sigmoid(z @ layer["W_f"].T + layer["b_f"])
    i = sigmoid(z @ layer["W_i"].T + layer["b_i"])
    g = np.tanh(z @ layer["W_c"].T + layer["b_c"])
    o = sigmoid(z @ layer["W_o"].T + layer["b_o"])
    c = f * prev.cell + i * g
    tanh_c = np.tanh(c)
    h = o * tanh_c
    if not (np.all(np.isfinite(c)) and np.all(np.isfinite(h))):
        raise DivergenceError("LSTM 单元出现非有限值，权重可能已发散")
    return LstmState(hidden=h, cell=c), GateCache(z=z, f=f, i=i, g=g, o=o, c_prev=prev.cell, c=c, tanh_c=tanh_c)
