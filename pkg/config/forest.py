#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@Description: 随机森林参数
"""
RF_N_ESTIMATORS = 100
# None 表示不限深度
RF_MAX_DEPTH = 10
RF_MIN_SAMPLES_SPLIT = 2
# None: 回归时默认 ceil(d/3)；"all": 每次分裂都用全部特征；整数: 固定个数
RF_MAX_FEATURES = None
RF_BOOTSTRAP = True
RF_TASK = "regression"

# 阈值比较时的相对容差，近似相等的分裂按 (特征序号, 阈值) 先到先得
SPLIT_TIE_RTOL = 1e-12
