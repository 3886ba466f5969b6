#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@File       : errors.py
@Description: 错误分类与退出码。
              0 成功、2 I/O、3 参数校验、4 序列化、5 数值发散；CLI 捕获 ForecastError 后按 exit_code 退出。
"""


class ForecastError(Exception):
    """所有可预期错误的基类。category 用于一行可解析的错误输出。"""

    category = "internal"
    exit_code = 1

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

    def one_line(self) -> str:
        detail = " ".join(str(self.message).split())
        return f"error={self.category} code={self.exit_code} detail={detail}"


class DataIOError(ForecastError):
    category = "io"
    exit_code = 2


class ValidationError(ForecastError):
    category = "validation"
    exit_code = 3


class UnsupportedModeError(ValidationError):
    """递归预测遇到需要未来外生变量的融合模式。"""


class SerializationError(ForecastError):
    category = "serialization"
    exit_code = 4


class DivergenceError(ForecastError):
    category = "numerical"
    exit_code = 5

    def __init__(self, message: str, epoch: int = -1):
        super().__init__(message)
        self.epoch = epoch
