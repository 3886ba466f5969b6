#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@Description: 数据工程参数 (CSV 列名、滑动窗口、训练/测试划分)
"""
# 目标列与日期列（G2chla 为叶绿素浓度）
TARGET_COLUMN = "G2chla"
DATE_COLUMN = "date"
EXO_COLUMNS = ["temperature", "salinity", "dissolved_oxygen", "nitrite", "pressure"]

# 滑动窗口长度 L 与训练集比例（前 80% 训练，后 20% 测试，不打乱）
WINDOW_LEN = 30
TRAIN_FRACTION = 0.8
# False: 全样本拟合归一化参数（默认）；True: 只用训练行拟合，无泄漏
FIT_NORM_ON_TRAIN = False

# 日期只接受 ISO-8601：YYYY-MM-DD，可带时间后缀
DATE_FORMAT = "ISO8601"
# 至少需要的有效行数
MIN_VALID_ROWS = 2
# 往返误差检查容差
NORMALIZATION_RTOL = 1e-12

# 合成数据默认参数（cmd_synth）
SYNTH_LENGTH = 400
SYNTH_START_DATE = "2020-01-01"
SYNTH_PERIOD = 73.0
SYNTH_NOISE = 0.05
SYNTH_SEED = 7
# 营养盐脉冲：前段稀疏，SYNTH_SURGE_START 之后变密（测试段方差变大，只有外生变量能解释）
SYNTH_PULSE_RATE = 0.04
SYNTH_SURGE_RATE = 0.35
SYNTH_SURGE_START = 0.75
