#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@Description: 随机森林模块：CART、Bagging、回归/分类预测、MDI 特征重要性、序列化
"""
from services.forest.forest import (
    ALL_FEATURES,
    ForestConfig,
    ForestModel,
    bootstrap_sample,
    fit_forest,
    importance,
    importance_table,
    predict_classification,
    predict_classification_batch,
    predict_regression,
    predict_regression_batch,
    tree_rng,
)
from services.forest.serialization import forest_from_document, forest_to_document, write_importance_csv
from services.forest.tree import CLASSIFICATION, LEAF, REGRESSION, Split, Tree, best_split, build_tree

__all__ = [
    "ALL_FEATURES", "ForestConfig", "ForestModel", "bootstrap_sample", "fit_forest", "importance",
    "importance_table", "predict_classification", "predict_classification_batch", "predict_regression",
    "predict_regression_batch", "tree_rng",
    "forest_from_document", "forest_to_document", "write_importance_csv",
    "CLASSIFICATION", "LEAF", "REGRESSION", "Split", "Tree", "best_split", "build_tree",
]
