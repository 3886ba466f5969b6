#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@File       : serialization.py
@Description: 森林的版本化 JSON：配置、特征名、重要性，然后每棵树一个先序节点列表（子节点用下标）。
              重要性报告：(feature_name, importance) 降序 CSV。
"""
from pathlib import Path
from typing import Any, Dict

import numpy as np
import pandas as pd

from services.forest.forest import ForestConfig, ForestModel, importance_table
from services.forest.tree import LEAF, Tree
from utils.errors import SerializationError, ValidationError
from utils.serialization import check_document, decode_float, decode_float_list, encode_float, encode_float_list, make_document

FOREST_FORMAT = "lstm-rf/forest"


def _tree_to_nodes(tree: Tree) -> list:
    return [
        {
            "feature": int(tree.feature[k]),
            "threshold": encode_float(tree.threshold[k]),
            "left": int(tree.left[k]),
            "right": int(tree.right[k]),
            "value": encode_float(tree.value[k]),
            "impurity_decrease": encode_float(tree.impurity_decrease[k]),
            "n_samples": int(tree.n_samples[k]),
        }
        for k in range(len(tree))
    ]


def _nodes_to_tree(nodes: list, n_features: int) -> Tree:
    if not nodes:
        raise SerializationError("树没有节点")
    tree = Tree()
    for node in nodes:
        tree.feature.append(int(node["feature"]))
        tree.threshold.append(decode_float(node["threshold"]))
        tree.left.append(int(node["left"]))
        tree.right.append(int(node["right"]))
        tree.value.append(decode_float(node["value"]))
        tree.impurity_decrease.append(decode_float(node["impurity_decrease"]))
        tree.n_samples.append(int(node["n_samples"]))
    size = len(tree)
    for k in range(size):
        if not LEAF <= tree.feature[k] < n_features:
            raise SerializationError(f"节点 {k} 的特征下标 {tree.feature[k]} 超出 [0, {n_features})")
        if tree.feature[k] != LEAF and not (k < tree.left[k] < size and k < tree.right[k] < size):
            raise SerializationError(f"节点 {k} 的子节点下标越界")
    return tree


def forest_to_document(model: ForestModel) -> Dict[str, Any]:
    return make_document(FOREST_FORMAT, {
        "config": model.config.to_dict(),
        "n_features": model.n_features,
        "feature_names": list(model.feature_names),
        "feature_importances": encode_float_list(model.feature_importances),
        "classes": None if model.classes is None else [c.item() if hasattr(c, "item") else c for c in model.classes],
        "trees": [_tree_to_nodes(t) for t in model.trees],
    })


def forest_from_document(doc: Dict[str, Any]) -> ForestModel:
    check_document(doc, FOREST_FORMAT)
    try:
        config = ForestConfig(**doc["config"])
        classes = doc.get("classes")
        n_features = int(doc["n_features"])
        importances = np.array(decode_float_list(doc["feature_importances"]))
        if n_features < 1 or importances.shape != (n_features,):
            raise SerializationError(f"n_features={n_features} 与重要性向量长度 {importances.size} 不一致")
        return ForestModel(
            trees=[_nodes_to_tree(nodes, n_features) for nodes in doc["trees"]],
            config=config,
            n_features=n_features,
            feature_importances=importances,
            feature_names=list(doc["feature_names"]),
            classes=None if classes is None else np.asarray(classes),
        )
    except (KeyError, TypeError, ValueError, ValidationError) as e:
        raise SerializationError(f"森林文档损坏: {e}") from e


def write_importance_csv(model: ForestModel, path) -> Path:
    path = Path(path)
    rows = importance_table(model)
    frame = pd.DataFrame(rows, columns=["feature_name", "importance"])
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format="%.17g", lineterminator="\n")
    return path
