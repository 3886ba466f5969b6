#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@Description: 外部数据接入层入口。
              dataio: CSV 读取、标准化、滑动窗口、合成数据
"""
