#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@Description: 随机种子、线程数、日志开关等杂项（只有种子与线程数允许用环境变量覆盖）
"""
import logging
import os

SEED = int(os.getenv("LSTMRF_SEED", "2025"))
# 工作线程上限（森林建树、网格组合并行）；结果与线程数无关
THREADS = max(1, int(os.getenv("LSTMRF_THREADS", "1")))

LOG_TO_FILE = (os.getenv("LSTMRF_LOG_TO_FILE", "1") or "1").strip() not in ("0", "false", "False")
LOG_LEVEL = getattr(logging, (os.getenv("LSTMRF_LOG_LEVEL", "INFO") or "INFO").strip().upper(), logging.INFO)

# 各类输出文档的 schema 版本
SCHEMA_VERSION = 1
