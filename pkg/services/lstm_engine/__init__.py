#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@Description: LSTM 引擎：记忆单元、多层前向、BPTT、全批量训练、特征提取、序列化
"""
from services.lstm_engine.cell import GateCache, LstmState, cell_step, sigmoid
from services.lstm_engine.features import FusionMode, extract_features, feature_dimension, feature_names
from services.lstm_engine.gradcheck import check_gradients, numeric_gradient
from services.lstm_engine.network import ForwardTrace, backward, forward, forward_batch, loss_mse
from services.lstm_engine.params import LstmConfig, LstmParameters, init_parameters, zeros
from services.lstm_engine.serialization import lstm_from_document, lstm_to_document
from services.lstm_engine.trainer import TrainResult, clip_gradients, train

__all__ = [
    "GateCache", "LstmState", "cell_step", "sigmoid",
    "FusionMode", "extract_features", "feature_dimension", "feature_names",
    "check_gradients", "numeric_gradient",
    "ForwardTrace", "backward", "forward", "forward_batch", "loss_mse",
    "LstmConfig", "LstmParameters", "init_parameters", "zeros",
    "lstm_from_document", "lstm_to_document",
    "TrainResult", "clip_gradients", "train",
]
