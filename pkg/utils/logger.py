#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@File       : logger.py
@Description: 统一日志工具
              - 文件日志写到 logs/YYYY-MM-DD/<分组>.log，分组: main、data、lstm、forest、pipeline
              - 跨零点运行时下一条记录自动写入新日期目录
              - LSTMRF_LOG_TO_FILE=0 时只输出到 stderr（测试用）
              - stdout 只留给命令的结果表，日志一律走 stderr
"""

import logging
import sys
from datetime import date
from pathlib import Path

from config.settings import LOGS_ROOT, LOG_LEVEL, LOG_TO_FILE

_FORMAT = "%(asctime)s | %(levelname)-8s | %(name)s | %(message)s"
_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

# 模块前缀 -> 日志分组，按顺序匹配
_GROUPS = (
    ("src.dataio", "data"),
    ("tools", "main"),
    ("services.lstm_engine", "lstm"),
    ("services.forest", "forest"),
    ("services.", "pipeline"),
)

_configured: set = set()


def log_group(name: str) -> str:
    """Logger 名称 -> 日志分组（即文件名，不含 .log）；未匹配的归入 main。"""
    for prefix, group in _GROUPS:
        if name and name.startswith(prefix):
            return group
    return "main"


class DailyGroupFileHandler(logging.FileHandler):
    """写入 <root>/<当天日期>/<group>.log；日期变化时关闭旧流，下一条记录落到新目录。"""

    def __init__(self, group: str, root: Path):
        self.group = group
        self.root = Path(root)
        self.day = date.today()
        super().__init__(str(self._path_for(self.day)), encoding="utf-8", delay=True)

    def _path_for(self, day: date) -> Path:
        folder = self.root / day.isoformat()
        folder.mkdir(parents=True, exist_ok=True)
        return folder / f"{self.group}.log"

    def emit(self, record: logging.LogRecord):
        try:
            today = date.today()
            if today != self.day:
                self.close()
                self.day = today
                self.baseFilename = str(self._path_for(today))
            super().emit(record)
        except Exception:
            self.handleError(record)


def get_logger(name: str, level: int = LOG_LEVEL) -> logging.Logger:
    """
    取得已挂好 handler 的 Logger；同名重复调用不会重复挂 handler。

    :param name: 通常传 __name__，CLI 入口传 "Main"
    :param level: 日志级别，默认取 LSTMRF_LOG_LEVEL
    """
    logger = logging.getLogger(name)
    if name in _configured or logger.handlers:
        return logger
    _configured.add(name)
    logger.setLevel(level)
    logger.propagate = False
    formatter = logging.Formatter(_FORMAT, datefmt=_DATE_FORMAT)

    handlers = [logging.StreamHandler(sys.stderr)]
    if LOG_TO_FILE:
        handlers.append(DailyGroupFileHandler(log_group(name), LOGS_ROOT))
    for handler in handlers:
        handler.setLevel(level)
        handler.setFormatter(formatter)
        logger.addHandler(handler)
    return logger
