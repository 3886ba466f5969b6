#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@Description: LSTM 参数 (网络结构、训练、梯度裁剪)
"""
LSTM_HIDDEN_SIZE = 32
LSTM_NUM_LAYERS = 1
LSTM_INPUT_SIZE = 1
LSTM_LEARNING_RATE = 0.005
LSTM_EPOCHS = 300

# 全局梯度范数裁剪阈值
GRAD_CLIP_NORM = 5.0
# 遗忘门偏置初始值，便于早期保留记忆
FORGET_BIAS_INIT = 1.0
# 每隔多少个 epoch 打一次 loss 日志
LOG_EVERY_EPOCHS = 50

# 有限差分梯度校验
GRAD_CHECK_EPS = 1e-5
GRAD_CHECK_RTOL = 1e-4
