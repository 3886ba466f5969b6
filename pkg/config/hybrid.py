#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@Description: 混合模型 (LSTM -> RF) 参数
"""
# PRED: LSTM 标量预测；HIDDEN: 末步隐状态 h_t；SPLICE: [x_t; h_t]
FUSION_MODE = "PRED"
INCLUDE_EXOGENOUS = False
FORECAST_HORIZON = 1
