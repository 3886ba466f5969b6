#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@File       : __init__.py
@Description: 配置包。常量按模块拆分，settings.py 汇总；run_config.py 负责单次运行的声明式配置。
"""
