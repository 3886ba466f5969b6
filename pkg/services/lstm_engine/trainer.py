#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@File       : trainer.py
@Description: LSTM 训练：全批量梯度下降、固定学习率、全局范数裁剪。
              训练集使用标准化标签 labels_norm；同输入同 seed 得到 bit 一致的参数与 loss 曲线。
"""
from dataclasses import dataclass
from typing import List

import numpy as np

from config.settings import LOG_EVERY_EPOCHS
from services.lstm_engine.network import backward, forward_batch, loss_mse
from services.lstm_engine.params import LstmConfig, LstmParameters, init_parameters
from src.dataio.windows import WindowedDataset
from utils.errors import DivergenceError, ValidationError
from utils.logger import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class TrainResult:
    params: LstmParameters
    loss_history: List[float]
    clip_events: int


def clip_gradients(grads: LstmParameters, max_norm: float):
    """全局范数超过 max_norm 时等比缩放，返回 (梯度, 是否裁剪)。"""
    norm = grads.global_norm()
    if norm > max_norm:
        scale = max_norm / norm
        return grads.map(lambda t: t * scale), True
    return grads, False


def train(config: LstmConfig, train_set: WindowedDataset) -> TrainResult:
    if len(train_set) == 0:
        raise ValidationError("训练集为空")
    windows = train_set.inputs
    targets = train_set.labels_norm
    params = init_parameters(config)
    lr = config.learning_rate
    history: List[float] = []
    clip_events = 0
    for epoch in range(config.epochs):
        try:
            predictions, trace = forward_batch(params, windows)
            loss = loss_mse(predictions, targets)
            if not np.isfinite(loss):
                raise DivergenceError(f"第 {epoch} 个 epoch 的 loss 非有限", epoch=epoch)
            grads = backward(params, windows, targets, trace)
        except DivergenceError as e:
            raise DivergenceError(f"LSTM 训练在第 {epoch} 个 epoch 发散: {e.message}", epoch=epoch) from e
        grads, clipped = clip_gradients(grads, config.clip_norm)
        clip_events += int(clipped)
        params = params.combine(grads, lambda p, g: p - lr * g)
        history.append(loss)
        if (epoch + 1) % LOG_EVERY_EPOCHS == 0 or epoch == 0 or epoch + 1 == config.epochs:
            logger.info("epoch %d/%d loss=%.6f", epoch + 1, config.epochs, loss)
    if clip_events:
        logger.info("✂️ 梯度裁剪 %d 次 (阈值 %.2f)", clip_events, config.clip_norm)
    return TrainResult(params=params, loss_history=history, clip_events=clip_events)
