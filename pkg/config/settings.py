#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@Description: 配置聚合入口 - 从子模块汇总，统一 from config.settings import X
"""
# 1. 必须先加载 base（会执行 load_dotenv）
from config.base import BASE_DIR, ENV_PATH

# 2. 路径与输出文件名
from config.paths import (
    DATA_DIR,
    OUTPUT_DIR,
    LOGS_ROOT,
    MODEL_FILE_NAME,
    TRAIN_REPORT_FILE_NAME,
    PREDICTIONS_FILE_NAME,
    COMPARE_REPORT_FILE_NAME,
    COMPARE_PREDICTIONS_PREFIX,
    TUNE_LSTM_FILE_NAME,
    TUNE_RF_FILE_NAME,
    IMPORTANCE_FILE_NAME,
    FORECAST_FILE_NAME,
    RESOLVED_CONFIG_FILE_NAME,
    SYNTH_FILE_NAME,
)

# 3. 数据工程
from config.data import (
    TARGET_COLUMN,
    DATE_COLUMN,
    EXO_COLUMNS,
    WINDOW_LEN,
    TRAIN_FRACTION,
    FIT_NORM_ON_TRAIN,
    DATE_FORMAT,
    MIN_VALID_ROWS,
    NORMALIZATION_RTOL,
    SYNTH_LENGTH,
    SYNTH_START_DATE,
    SYNTH_PERIOD,
    SYNTH_NOISE,
    SYNTH_SEED,
    SYNTH_PULSE_RATE,
    SYNTH_SURGE_RATE,
    SYNTH_SURGE_START,
)

# 4. LSTM
from config.lstm import (
    LSTM_HIDDEN_SIZE,
    LSTM_NUM_LAYERS,
    LSTM_INPUT_SIZE,
    LSTM_LEARNING_RATE,
    LSTM_EPOCHS,
    GRAD_CLIP_NORM,
    FORGET_BIAS_INIT,
    LOG_EVERY_EPOCHS,
    GRAD_CHECK_EPS,
    GRAD_CHECK_RTOL,
)

# 5. 随机森林
from config.forest import (
    RF_N_ESTIMATORS,
    RF_MAX_DEPTH,
    RF_MIN_SAMPLES_SPLIT,
    RF_MAX_FEATURES,
    RF_BOOTSTRAP,
    RF_TASK,
    SPLIT_TIE_RTOL,
)

# 6. 混合模型
from config.hybrid import FUSION_MODE, INCLUDE_EXOGENOUS, FORECAST_HORIZON

# 7. 网格搜索
from config.tune import TUNE_LSTM_GRID, TUNE_RF_GRID, TUNE_LSTM_OBJECTIVE, TUNE_RF_OBJECTIVE

# 8. 杂项
from config.misc import SEED, THREADS, LOG_TO_FILE, LOG_LEVEL, SCHEMA_VERSION
