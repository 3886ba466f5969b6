#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@File       : gradcheck.py
@Description: 有限差分梯度校验：中心差分 (L(θ+ε) - L(θ-ε)) / 2ε 与 BPTT 解析梯度逐分量比较。
"""
from dataclasses import dataclass

import numpy as np

from config.settings import GRAD_CHECK_EPS, GRAD_CHECK_RTOL
from services.lstm_engine.network import backward, forward_batch, loss_mse
from services.lstm_engine.params import LstmParameters


@dataclass(frozen=True)
class GradCheckResult:
    analytic: np.ndarray
    numeric: np.ndarray
    max_rel_error: float
    checked: int

    def passed(self, rtol: float = GRAD_CHECK_RTOL) -> bool:
        return self.max_rel_error <= rtol


def batch_loss(params: LstmParameters, windows, targets) -> float:
    predictions, _ = forward_batch(params, windows)
    return loss_mse(predictions, targets)


def numeric_gradient(params: LstmParameters, windows, targets, eps: float = GRAD_CHECK_EPS) -> np.ndarray:
    theta = params.flatten()
    grad = np.zeros_like(theta)
    for j in range(theta.size):
        plus = theta.copy()
        plus[j] += eps
        minus = theta.copy()
        minus[j] -= eps
        grad[j] = (
            batch_loss(params.unflatten(plus), windows, targets)
            - batch_loss(params.unflatten(minus), windows, targets)
        ) / (2.0 * eps)
    return grad


def check_gradients(
    params: LstmParameters,
    windows,
    targets,
    eps: float = GRAD_CHECK_EPS,
    min_magnitude: float = 1e-8,
) -> GradCheckResult:
    """只对 |g| > min_magnitude 的分量统计相对误差 |a-n| / max(|a|, |n|)。"""
    _, trace = forward_batch(params, windows)
    analytic = backward(params, windows, targets, trace).flatten()
    numeric = numeric_gradient(params, windows, targets, eps)
    scale = np.maximum(np.abs(analytic), np.abs(numeric))
    mask = scale > min_magnitude
    rel = np.abs(analytic - numeric)[mask] / scale[mask]
    max_rel = float(rel.max()) if rel.size else 0.0
    return GradCheckResult(analytic=analytic, numeric=numeric, max_rel_error=max_rel, checked=int(mask.sum()))
