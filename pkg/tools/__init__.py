#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@File       : __init__.py
@Description: 独立脚本：窗口导出、指标表打印
"""
