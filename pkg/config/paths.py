#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@Description: 路径统一管理
              data/ 放输入与合成数据，output/ 放每次运行的模型、报告、CSV，logs/ 放按日期分目录的日志。
"""
import os
from pathlib import Path

from config.base import BASE_DIR

DATA_DIR = BASE_DIR / "data"
OUTPUT_DIR = Path(os.getenv("LSTMRF_OUTPUT_DIR", "") or (BASE_DIR / "output"))
LOGS_ROOT = Path(os.getenv("LSTMRF_LOG_DIR", "") or (BASE_DIR / "logs"))

# 输出文件名（cmd_train / cmd_compare / cmd_tune / cmd_importance / cmd_predict）
MODEL_FILE_NAME = "hybrid_model.json"
TRAIN_REPORT_FILE_NAME = "train_report.json"
PREDICTIONS_FILE_NAME = "predictions.csv"
COMPARE_REPORT_FILE_NAME = "comparison.json"
COMPARE_PREDICTIONS_PREFIX = "predictions_"
TUNE_LSTM_FILE_NAME = "grid_lstm.csv"
TUNE_RF_FILE_NAME = "grid_rf.csv"
IMPORTANCE_FILE_NAME = "importance.csv"
FORECAST_FILE_NAME = "forecast.csv"
RESOLVED_CONFIG_FILE_NAME = "resolved_config.json"
SYNTH_FILE_NAME = "synthetic.csv"
