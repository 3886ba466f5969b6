#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@File       : serialization.py
@Description: LSTM 模型的版本化 JSON：先配置，再按固定顺序列出每个张量 (shape + 行优先 hex 浮点)。
"""
from typing import Any, Dict, Tuple

import numpy as np

from services.lstm_engine.params import BIAS_KEYS, WEIGHT_KEYS, LstmConfig, LstmParameters
from utils.errors import SerializationError, ValidationError
from utils.serialization import check_document, decode_array, decode_float, encode_array, encode_float, make_document

LSTM_FORMAT = "lstm-rf/lstm"


def lstm_to_document(config: LstmConfig, params: LstmParameters) -> Dict[str, Any]:
    cfg = config.to_dict()
    cfg["learning_rate"] = encode_float(cfg["learning_rate"])
    cfg["clip_norm"] = encode_float(cfg["clip_norm"])
    return make_document(LSTM_FORMAT, {
        "config": cfg,
        "tensors": [{"name": name, **encode_array(t)} for name, t in params.named_tensors()],
    })


def lstm_from_document(doc: Dict[str, Any]) -> Tuple[LstmConfig, LstmParameters]:
    check_document(doc, LSTM_FORMAT)
    try:
        cfg = dict(doc["config"])
        cfg["learning_rate"] = decode_float(cfg["learning_rate"])
        cfg["clip_norm"] = decode_float(cfg["clip_norm"])
        config = LstmConfig(**cfg)
        tensors = {t["name"]: decode_array(t) for t in doc["tensors"]}
        layers = [
            {key: tensors[f"layers.{k}.{key}"] for key in WEIGHT_KEYS + BIAS_KEYS}
            for k in range(config.num_layers)
        ]
        params = LstmParameters(layers=layers, w_out=tensors["w_out"], b_out=np.asarray(tensors["b_out"]))
        params.check_shapes(config)
    except (KeyError, TypeError, ValidationError) as e:
        raise SerializationError(f"LSTM 文档损坏: {e}") from e
    return config, params
