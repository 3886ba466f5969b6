#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@File       : network.py
@Description: 多层 LSTM 前向、MSE 损失与沿时间反向传播（BPTT）。
              第 k 层的隐状态序列作为第 k+1 层的输入序列，只有顶层末步隐状态进入输出投影。
              全部按批量 (N, L, In) 向量化，64 位浮点。
"""
from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

import numpy as np

from services.lstm_engine.cell import GateCache, LstmState, cell_step
from services.lstm_engine.params import BIAS_KEYS, GATES, WEIGHT_KEYS, LstmParameters
from utils.errors import DivergenceError, ValidationError


@dataclass(frozen=True)
class ForwardTrace:
    """caches[k][t] 为第 k 层第 t 步的门缓存；final_hidden 为顶层末步隐状态 (N, H)。"""

    caches: List[List[GateCache]]
    final_hidden: np.ndarray
    batch: int


def as_batch(windows, input_size: int) -> np.ndarray:
    """(L,) / (N, L) / (N, L, In) -> (N, L, In)。"""
    arr = np.asarray(windows, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim == 2:
        if input_size != 1:
            raise ValidationError(f"二维窗口只适用于 input_size=1，模型为 {input_size}")
        arr = arr[:, :, None]
    if arr.ndim != 3 or arr.shape[2] != input_size:
        raise ValidationError(f"窗口形状 {np.shape(windows)} 与 input_size={input_size} 不符")
    if arr.shape[1] < 1:
        raise ValidationError("窗口长度必须 >= 1")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("窗口含非有限值")
    return arr


def forward_batch(params: LstmParameters, windows) -> Tuple[np.ndarray, ForwardTrace]:
    x = as_batch(windows, params.input_size)
    n, length, _ = x.shape
    hsize = params.hidden_size
    seq = [x[:, t, :] for t in range(length)]
    caches: List[List[GateCache]] = []
    for layer in params.layers:
        state = LstmState.zeros(hsize, batch=n)
        layer_caches = []
        outputs = []
        for t in range(length):
            state, cache = cell_step(layer, seq[t], state)
            layer_caches.append(cache)
            outputs.append(state.hidden)
        caches.append(layer_caches)
        seq = outputs
    final_hidden = seq[-1]
    predictions = final_hidden @ params.w_out + params.b_out
    return predictions, ForwardTrace(caches=caches, final_hidden=final_hidden, batch=n)


def forward(params: LstmParameters, window) -> Tuple[Union[float, np.ndarray], ForwardTrace]:
    """单个窗口 (L,) 返回标量预测；批量窗口返回 (N,) 预测。"""
    predictions, trace = forward_batch(params, window)
    if np.ndim(window) == 1:
        return float(predictions[0]), trace
    return predictions, trace


def loss_mse(predictions: Sequence[float], targets: Sequence[float]) -> float:
    p = np.asarray(predictions, dtype=np.float64).ravel()
    y = np.asarray(targets, dtype=np.float64).ravel()
    if p.size != y.size:
        raise ValidationError(f"预测长度 {p.size} 与目标长度 {y.size} 不一致")
    if p.size == 0:
        raise ValidationError("loss_mse 输入为空")
    return float(np.mean(np.square(p - y)))


def backward(
    params: LstmParameters,
    windows,
    targets: Sequence[float],
    trace: ForwardTrace,
) -> LstmParameters:
    """
    批量平均 MSE 对全部参数的解析梯度，形状与 params 一致。
    windows 须与生成 trace 的前向输入一致（按第一层缓存的输入逐元素核对）。
    """
    x = as_batch(windows, params.input_size)
    y = np.asarray(targets, dtype=np.float64).ravel()
    if y.size != trace.batch or x.shape[0] != trace.batch:
        raise ValidationError(f"目标个数 {y.size}、窗口个数 {x.shape[0]} 与前向批量 {trace.batch} 不一致")
    if x.shape[1] != len(trace.caches[0]):
        raise ValidationError(f"窗口长度 {x.shape[1]} 与前向展开步数 {len(trace.caches[0])} 不一致")
    hsize = params.hidden_size
    if any(not np.array_equal(cache.z[:, hsize:], x[:, t, :]) for t, cache in enumerate(trace.caches[0])):
        raise ValidationError("窗口与前向缓存的输入不一致")
    predictions = trace.final_hidden @ params.w_out + params.b_out
    d_pred = 2.0 * (predictions - y) / y.size

    grad_w_out = trace.final_hidden.T @ d_pred
    grad_b_out = np.asarray(np.sum(d_pred))

    length = len(trace.caches[0])
    # 来自上方（输出投影或上一层）的隐状态梯度，按时间步存放
    dh_from_above = [np.zeros((trace.batch, hsize)) for _ in range(length)]
    dh_from_above[-1] = np.outer(d_pred, params.w_out)

    grad_layers = [None] * params.num_layers
    for k in reversed(range(params.num_layers)):
        layer = params.layers[k]
        caches = trace.caches[k]
        grads = {key: np.zeros_like(layer[key]) for key in WEIGHT_KEYS + BIAS_KEYS}
        dh_next = np.zeros((trace.batch, hsize))
        dc_next = np.zeros((trace.batch, hsize))
        dx = [None] * length
        for t in reversed(range(length)):
            cache = caches[t]
            dh = dh_from_above[t] + dh_next
            do = dh * cache.tanh_c
            dc = dc_next + dh * cache.o * (1.0 - cache.tanh_c ** 2)
            pre = {
                "f": dc * cache.c_prev * cache.f * (1.0 - cache.f),
                "i": dc * cache.g * cache.i * (1.0 - cache.i),
                "c": dc * cache.i * (1.0 - cache.g ** 2),
                "o": do * cache.o * (1.0 - cache.o),
            }
            dc_next = dc * cache.f
            dz = np.zeros_like(cache.z)
            for gate in GATES:
                grads[f"W_{gate}"] += pre[gate].T @ cache.z
                grads[f"b_{gate}"] += pre[gate].sum(axis=0)
                dz += pre[gate] @ layer[f"W_{gate}"]
            dh_next = dz[:, :hsize]
            dx[t] = dz[:, hsize:]
        grad_layers[k] = grads
        dh_from_above = dx

    gradients = LstmParameters(layers=grad_layers, w_out=grad_w_out, b_out=grad_b_out)
    if not gradients.is_finite():
        raise DivergenceError("梯度出现非有限值")
    return gradients
