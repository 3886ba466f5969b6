#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@Description: 网格搜索参数 (LSTM 阶段按 Pearson 排序，RF 阶段按 R² 排序)
"""
TUNE_LSTM_GRID = {
    "hidden_size": [32, 50],
    "num_layers": [1, 2],
    "learning_rate": [0.001, 0.005],
    "sequence_len": [20, 30],
}
TUNE_RF_GRID = {
    "n_estimators": [50, 100],
    "max_depth": [None, 10],
    "min_samples_split": [2, 5],
}
TUNE_LSTM_OBJECTIVE = "PEARSON"
TUNE_RF_OBJECTIVE = "R2"
