#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@Description: 核心算法层：lstm_engine（LSTM + BPTT）、forest（随机森林）、hybrid_pipeline、metrics、tuner
"""
