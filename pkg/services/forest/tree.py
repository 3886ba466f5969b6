#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@File       : tree.py
@Description: CART 决策树。
              回归用方差减少（等价于最小加权 MSE），分类用 Gini；候选阈值为相邻不同取值的中点。
              样本 x[f] <= threshold 走左子树。节点按先序存放在平铺数组里，子节点用下标引用。
              增益近似相等（相对容差 SPLIT_TIE_RTOL）时取特征序号最小、阈值最小的分裂，保证跨平台一致。
"""
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from config.settings import SPLIT_TIE_RTOL
from utils.errors import ValidationError

LEAF = -1
REGRESSION = "regression"
CLASSIFICATION = "classification"


@dataclass(frozen=True)
class Split:
    feature: int
    threshold: float
    impurity_decrease: float


@dataclass
class Tree:
    """先序平铺节点。叶子 feature == -1，value 为叶子输出（回归为均值，分类为类别下标）。"""

    feature: List[int] = field(default_factory=list)
    threshold: List[float] = field(default_factory=list)
    left: List[int] = field(default_factory=list)
    right: List[int] = field(default_factory=list)
    value: List[float] = field(default_factory=list)
    impurity_decrease: List[float] = field(default_factory=list)
    n_samples: List[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.feature)

    @property
    def is_leaf_only(self) -> bool:
        return len(self) == 1

    def add_node(self, n_samples: int) -> int:
        self.feature.append(LEAF)
        self.threshold.append(0.0)
        self.left.append(LEAF)
        self.right.append(LEAF)
        self.value.append(0.0)
        self.impurity_decrease.append(0.0)
        self.n_samples.append(int(n_samples))
        return len(self.feature) - 1

    def depth(self, node: int = 0) -> int:
        if self.feature[node] == LEAF:
            return 0
        return 1 + max(self.depth(self.left[node]), self.depth(self.right[node]))

    def predict(self, features: np.ndarray) -> np.ndarray:
        """批量预测，features 形状 (N, d)。"""
        x = np.asarray(features, dtype=np.float64)
        feature = np.asarray(self.feature)
        threshold = np.asarray(self.threshold)
        left = np.asarray(self.left)
        right = np.asarray(self.right)
        node = np.zeros(x.shape[0], dtype=np.int64)
        while True:
            feat = feature[node]
            active = np.flatnonzero(feat != LEAF)
            if active.size == 0:
                break
            cur = node[active]
            go_left = x[active, feat[active]] <= threshold[cur]
            node[active] = np.where(go_left, left[cur], right[cur])
        return np.asarray(self.value)[node]

    def feature_decrease(self, n_features: int) -> np.ndarray:
        """各特征的样本加权不纯度下降之和（未归一化）。"""
        total = np.zeros(n_features)
        for f, dec, n in zip(self.feature, self.impurity_decrease, self.n_samples):
            if f != LEAF:
                total[f] += n * dec
        return total


def impurity(labels: np.ndarray, criterion: str, n_classes: int = 0) -> float:
    if criterion == REGRESSION:
        return float(np.var(labels))
    p = np.bincount(labels.astype(np.int64), minlength=n_classes) / labels.size
    return float(1.0 - np.sum(p * p))


def _regression_decreases(ys: np.ndarray, cut: np.ndarray, n: int) -> np.ndarray:
    """ys 已按特征排序；cut 为左子集大小（1..n-1）。返回每个切分位置的方差减少量。"""
    centered = ys - np.mean(ys)
    csum = np.cumsum(centered)
    csq = np.cumsum(centered * centered)
    total_sum, total_sq = csum[-1], csq[-1]
    n_left = cut.astype(np.float64)
    n_right = n - n_left
    left_sum, left_sq = csum[cut - 1], csq[cut - 1]
    right_sum, right_sq = total_sum - left_sum, total_sq - left_sq
    sse_left = left_sq - left_sum * left_sum / n_left
    sse_right = right_sq - right_sum * right_sum / n_right
    parent_sse = total_sq - total_sum * total_sum / n
    return (parent_sse - sse_left - sse_right) / n


def _gini_decreases(ys: np.ndarray, cut: np.ndarray, n: int, n_classes: int) -> np.ndarray:
    onehot = np.eye(n_classes)[ys.astype(np.int64)]
    counts = np.cumsum(onehot, axis=0)
    total = counts[-1]
    left = counts[cut - 1]
    right = total - left
    n_left = cut.astype(np.float64)
    n_right = n - n_left
    gini_left = 1.0 - np.sum((left / n_left[:, None]) ** 2, axis=1)
    gini_right = 1.0 - np.sum((right / n_right[:, None]) ** 2, axis=1)
    parent = 1.0 - np.sum((total / n) ** 2)
    return parent - (n_left * gini_left + n_right * gini_right) / n


def best_split(
    features: np.ndarray,
    labels: np.ndarray,
    candidate_features: Optional[Sequence[int]] = None,
    criterion: str = REGRESSION,
    n_classes: int = 0,
) -> Optional[Split]:
    """
    在候选特征 × 全部中点阈值中选不纯度下降最大的分裂；没有正的下降时返回 None（NO_SPLIT）。
    """
    x = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64)
    n = y.size
    if n < 2:
        raise ValidationError("best_split 至少需要 2 个样本")
    if candidate_features is None:
        candidate_features = range(x.shape[1])
    parent = impurity(y, criterion, n_classes)
    if parent <= 0.0:
        return None
    tol = SPLIT_TIE_RTOL * parent

    per_feature = []
    best = -np.inf
    for f in sorted(int(c) for c in candidate_features):
        order = np.argsort(x[:, f], kind="stable")
        xs = x[order, f]
        cut = np.flatnonzero(xs[1:] > xs[:-1]) + 1
        if cut.size == 0:
            continue
        ys = y[order]
        if criterion == REGRESSION:
            dec = _regression_decreases(ys, cut, n)
        else:
            dec = _gini_decreases(ys, cut, n, n_classes)
        per_feature.append((f, xs, cut, dec))
        best = max(best, float(dec.max()))
    if not per_feature or best <= tol:
        return None
    for f, xs, cut, dec in per_feature:
        hits = np.flatnonzero(dec >= best - tol)
        if hits.size:
            p = cut[hits[0]]
            threshold = (xs[p - 1] + xs[p]) / 2.0
            return Split(feature=f, threshold=float(threshold), impurity_decrease=float(dec[hits[0]]))
    return None


def _leaf_value(labels: np.ndarray, criterion: str, n_classes: int) -> float:
    if criterion == CLASSIFICATION:
        return float(np.argmax(np.bincount(labels.astype(np.int64), minlength=n_classes)))
    if np.all(labels == labels[0]):
        return float(labels[0])
    return float(np.mean(labels))


def build_tree(
    features: np.ndarray,
    labels: np.ndarray,
    max_depth: Optional[int],
    min_samples_split: int,
    max_features: int,
    rng: np.random.Generator,
    criterion: str = REGRESSION,
    n_classes: int = 0,
) -> Tree:
    """
    递归分裂，停止条件：深度到达 max_depth、样本数 < min_samples_split、标签全相同、无可用分裂。
    每个内部节点从 rng 重新抽取 max_features 个候选特征（等于 d 时不抽样）。
    """
    x = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64)
    if y.size == 0:
        raise ValidationError("build_tree 数据集为空")
    d = x.shape[1]
    tree = Tree()

    def grow(rows: np.ndarray, depth: int) -> int:
        node = tree.add_node(rows.size)
        ys = y[rows]
        tree.value[node] = _leaf_value(ys, criterion, n_classes)
        if max_depth is not None and depth >= max_depth:
            return node
        if rows.size < min_samples_split or np.all(ys == ys[0]):
            return node
        if max_features >= d:
            candidates = range(d)
        else:
            candidates = np.sort(rng.choice(d, size=max_features, replace=False))
        split = best_split(x[rows], ys, candidates, criterion, n_classes)
        if split is None:
            return node
        go_left = x[rows, split.feature] <= split.threshold
        left_rows, right_rows = rows[go_left], rows[~go_left]
        if left_rows.size == 0 or right_rows.size == 0:
            return node
        tree.feature[node] = split.feature
        tree.threshold[node] = split.threshold
        tree.impurity_decrease[node] = max(split.impurity_decrease, 0.0)
        tree.left[node] = grow(left_rows, depth + 1)
        tree.right[node] = grow(right_rows, depth + 1)
        return node

    grow(np.arange(y.size), 0)
    return tree
