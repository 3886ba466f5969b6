#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@File       : __init__.py
@Description: 工具包：统一 logger、错误分类、JSON 序列化、有序并行。
"""
from utils.logger import get_logger

__all__ = ["get_logger"]
