#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@File       : forest.py
@Description: 随机森林：自助采样 (Bagging) + 每个节点随机特征子集的 CART。
              回归输出为各树均值，分类为多数投票（平票取最小类别下标）。
              第 b 棵树的随机流由 (seed, b) 确定，并行与串行拟合结果 bit 一致。
"""
import math
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from config.settings import (
    RF_BOOTSTRAP,
    RF_MAX_DEPTH,
    RF_MAX_FEATURES,
    RF_MIN_SAMPLES_SPLIT,
    RF_N_ESTIMATORS,
    RF_TASK,
    SEED,
)
from services.forest.tree import CLASSIFICATION, REGRESSION, Tree, build_tree
from utils.errors import ValidationError
from utils.logger import get_logger
from utils.parallel import ordered_map

logger = get_logger(__name__)

ALL_FEATURES = "all"


@dataclass(frozen=True)
class ForestConfig:
    n_estimators: int = RF_N_ESTIMATORS
    max_depth: Optional[int] = RF_MAX_DEPTH
    min_samples_split: int = RF_MIN_SAMPLES_SPLIT
    # None: 回归 ceil(d/3)、分类 ceil(sqrt(d))；"all": 全部特征；整数: 固定个数
    max_features: Union[None, int, str] = RF_MAX_FEATURES
    seed: int = SEED
    bootstrap: bool = RF_BOOTSTRAP
    task: str = RF_TASK

    def __post_init__(self):
        if not _is_int(self.n_estimators) or self.n_estimators < 1:
            raise ValidationError(f"forest.n_estimators 必须 >= 1，实际 {self.n_estimators!r}")
        if self.max_depth is not None and (not _is_int(self.max_depth) or self.max_depth < 1):
            raise ValidationError(f"forest.max_depth 必须 >= 1 或 null，实际 {self.max_depth!r}")
        if not _is_int(self.min_samples_split) or self.min_samples_split < 2:
            raise ValidationError(f"forest.min_samples_split 必须 >= 2，实际 {self.min_samples_split!r}")
        mf = self.max_features
        if mf is not None and mf != ALL_FEATURES and (not _is_int(mf) or mf < 1):
            raise ValidationError(f"forest.max_features 必须为 null、\"all\" 或 >= 1 的整数，实际 {mf!r}")
        if self.task not in (REGRESSION, CLASSIFICATION):
            raise ValidationError(f"forest.task 必须为 regression 或 classification，实际 {self.task!r}")

    def resolve_max_features(self, n_features: int) -> int:
        if self.max_features == ALL_FEATURES:
            return n_features
        if self.max_features is None:
            if self.task == CLASSIFICATION:
                return max(1, math.ceil(math.sqrt(n_features)))
            return max(1, math.ceil(n_features / 3))
        if self.max_features > n_features:
            raise ValidationError(f"max_features={self.max_features} 超过特征数 {n_features}")
        return int(self.max_features)

    def to_dict(self) -> dict:
        return asdict(self)


def _is_int(value) -> bool:
    return isinstance(value, (int, np.integer)) and not isinstance(value, bool)


@dataclass
class ForestModel:
    trees: List[Tree]
    config: ForestConfig
    n_features: int
    feature_importances: np.ndarray
    feature_names: List[str] = field(default_factory=list)
    classes: Optional[np.ndarray] = None
    # 每棵树的自助采样下标（不采样时为 None），可用于袋外分析
    bootstrap_indices: Optional[List[np.ndarray]] = None

    def check_dimension(self, features: np.ndarray) -> np.ndarray:
        x = np.asarray(features, dtype=np.float64)
        if x.ndim == 1:
            x = x[None, :]
        if x.ndim != 2 or x.shape[1] != self.n_features:
            raise ValidationError(f"特征维度 {x.shape[-1]} 与训练时 {self.n_features} 不符")
        return x


def _validate_dataset(features, labels) -> Tuple[np.ndarray, np.ndarray]:
    x = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels)
    if x.ndim != 2:
        raise ValidationError(f"特征矩阵必须是二维，实际 {x.shape}")
    if x.shape[0] == 0:
        raise ValidationError("数据集为空")
    if y.shape != (x.shape[0],):
        raise ValidationError(f"标签形状 {y.shape} 与样本数 {x.shape[0]} 不符")
    if not np.all(np.isfinite(x)):
        raise ValidationError("特征含非有限值")
    return x, y


def bootstrap_sample(
    features: np.ndarray,
    labels: np.ndarray,
    rng: np.random.Generator,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """有放回抽取 N 次，返回 (特征, 标签, 下标)。"""
    x, y = _validate_dataset(features, labels)
    indices = rng.integers(0, x.shape[0], size=x.shape[0])
    return x[indices], y[indices], indices


def tree_rng(seed: int, tree_index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(tree_index)])


def fit_forest(
    features: np.ndarray,
    labels: Sequence,
    config: ForestConfig,
    feature_names: Optional[Sequence[str]] = None,
    threads: int = 1,
) -> ForestModel:
    x, y_raw = _validate_dataset(features, labels)
    n_features = x.shape[1]
    names = list(feature_names) if feature_names is not None else [f"x{j}" for j in range(n_features)]
    if len(names) != n_features:
        raise ValidationError(f"特征名个数 {len(names)} 与特征数 {n_features} 不符")
    max_features = config.resolve_max_features(n_features)

    classes = None
    n_classes = 0
    if config.task == CLASSIFICATION:
        classes, y = np.unique(y_raw, return_inverse=True)
        y = y.astype(np.float64)
        n_classes = len(classes)
    else:
        y = np.asarray(y_raw, dtype=np.float64)
        if not np.all(np.isfinite(y)):
            raise ValidationError("标签含非有限值")

    def fit_one(b: int):
        rng = tree_rng(config.seed, b)
        if config.bootstrap:
            xb, yb, idx = bootstrap_sample(x, y, rng)
        else:
            xb, yb, idx = x, y, None
        tree = build_tree(xb, yb, config.max_depth, config.min_samples_split, max_features, rng,
                          config.task, n_classes)
        return tree, idx

    fitted = ordered_map(fit_one, list(range(config.n_estimators)), threads)
    trees = [t for t, _ in fitted]
    model = ForestModel(
        trees=trees,
        config=config,
        n_features=n_features,
        feature_importances=np.zeros(n_features),
        feature_names=names,
        classes=classes,
        bootstrap_indices=[idx for _, idx in fitted] if config.bootstrap else None,
    )
    model.feature_importances = importance(model)
    logger.info(
        "🌲 森林拟合完成: %d 棵树, 样本 %d, 特征 %d, 平均节点数 %.1f",
        len(trees), x.shape[0], n_features, float(np.mean([len(t) for t in trees])),
    )
    return model


def importance(model: ForestModel) -> np.ndarray:
    """平均不纯度下降 (MDI)：各树中以该特征分裂的节点的样本加权下降量之和，再除以总和。"""
    total = np.zeros(model.n_features)
    for tree in model.trees:
        total += tree.feature_decrease(model.n_features)
    grand = total.sum()
    if grand <= 0:
        return np.zeros(model.n_features)
    return total / grand


def predict_regression_batch(model: ForestModel, features: np.ndarray) -> np.ndarray:
    x = model.check_dimension(features)
    outputs = np.stack([tree.predict(x) for tree in model.trees])
    return np.mean(outputs, axis=0)


def predict_regression(model: ForestModel, x: Sequence[float]) -> float:
    """单个特征向量 -> 各树输出的算术平均。"""
    return float(predict_regression_batch(model, np.asarray(x, dtype=np.float64)[None, :])[0])


def predict_classification_batch(model: ForestModel, features: np.ndarray) -> np.ndarray:
    if model.classes is None:
        raise ValidationError("该森林不是分类模型")
    x = model.check_dimension(features)
    votes = np.stack([tree.predict(x) for tree in model.trees]).astype(np.int64)
    counts = np.apply_along_axis(np.bincount, 0, votes, minlength=len(model.classes))
    # argmax 取第一个最大值，即最小类别下标
    return model.classes[np.argmax(counts, axis=0)]


def predict_classification(model: ForestModel, x: Sequence):
    return predict_classification_batch(model, np.asarray(x, dtype=np.float64)[None, :])[0]


def importance_table(model: ForestModel) -> List[Tuple[str, float]]:
    """(特征名, 重要性) 按重要性降序，平分时按特征顺序。"""
    order = sorted(range(model.n_features), key=lambda j: (-model.feature_importances[j], j))
    return [(model.feature_names[j], float(model.feature_importances[j])) for j in order]
