#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@File       : parallel.py
@Description: 有序并行 map（joblib 线程后端）。结果按输入下标排列，与线程数、完成顺序无关。
"""
from typing import Callable, List, Sequence, TypeVar

from joblib import Parallel, delayed

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(fn: Callable[[T], R], items: Sequence[T], threads: int = 1) -> List[R]:
    """threads<=1 时串行执行；否则走 joblib 线程池（numpy 运算释放 GIL）。"""
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    return Parallel(n_jobs=min(threads, len(items)), prefer="threads")(delayed(fn)(item) for item in items)
