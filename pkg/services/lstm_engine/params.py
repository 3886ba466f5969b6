#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@File       : params.py
@Description: LSTM 配置与参数张量。
              每层四个门 W_f/W_i/W_c/W_o 形状 (H, H + In)，作用于拼接向量 [h_{t-1}, x_t]；
              偏置 b_* 长度 H；输出投影 w_out (H,) 与标量 b_out 把顶层末步隐状态映射为标量预测。
"""
from dataclasses import asdict, dataclass, field
from typing import Dict, Iterator, List, Tuple

import numpy as np

from config.settings import (
    FORGET_BIAS_INIT,
    GRAD_CLIP_NORM,
    LSTM_EPOCHS,
    LSTM_HIDDEN_SIZE,
    LSTM_INPUT_SIZE,
    LSTM_LEARNING_RATE,
    LSTM_NUM_LAYERS,
    SEED,
)
from utils.errors import ValidationError

GATES = ("f", "i", "c", "o")
WEIGHT_KEYS = tuple(f"W_{g}" for g in GATES)
BIAS_KEYS = tuple(f"b_{g}" for g in GATES)


@dataclass(frozen=True)
class LstmConfig:
    hidden_size: int = LSTM_HIDDEN_SIZE
    num_layers: int = LSTM_NUM_LAYERS
    input_size: int = LSTM_INPUT_SIZE
    learning_rate: float = LSTM_LEARNING_RATE
    epochs: int = LSTM_EPOCHS
    seed: int = SEED
    clip_norm: float = GRAD_CLIP_NORM

    def __post_init__(self):
        for name in ("hidden_size", "num_layers", "input_size", "epochs"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
                raise ValidationError(f"lstm.{name} 必须是 >= 1 的整数，实际 {value!r}")
        if not (np.isfinite(self.learning_rate) and self.learning_rate > 0):
            raise ValidationError(f"lstm.learning_rate 必须 > 0，实际 {self.learning_rate!r}")
        if not self.clip_norm > 0:
            raise ValidationError(f"lstm.clip_norm 必须 > 0，实际 {self.clip_norm!r}")

    def to_dict(self) -> dict:
        return asdict(self)

    def layer_input_size(self, layer: int) -> int:
        return self.input_size if layer == 0 else self.hidden_size


@dataclass(frozen=True)
class LstmParameters:
    """layers[k] 为第 k 层的 {W_f, W_i, W_c, W_o, b_f, b_i, b_c, b_o}。"""

    layers: List[Dict[str, np.ndarray]]
    w_out: np.ndarray
    b_out: np.ndarray = field(default_factory=lambda: np.asarray(0.0))

    @property
    def hidden_size(self) -> int:
        return int(self.w_out.shape[0])

    @property
    def num_layers(self) -> int:
        return len(self.layers)

    @property
    def input_size(self) -> int:
        return int(self.layers[0]["W_f"].shape[1]) - self.hidden_size

    def named_tensors(self) -> Iterator[Tuple[str, np.ndarray]]:
        """固定顺序遍历全部张量，序列化、梯度展平、裁剪都依赖这一顺序。"""
        for k, layer in enumerate(self.layers):
            for key in WEIGHT_KEYS + BIAS_KEYS:
                yield f"layers.{k}.{key}", layer[key]
        yield "w_out", self.w_out
        yield "b_out", self.b_out

    def map(self, fn) -> "LstmParameters":
        """对每个张量应用 fn，返回新参数（原对象不变）。"""
        return LstmParameters(
            layers=[{key: fn(value) for key, value in layer.items()} for layer in self.layers],
            w_out=fn(self.w_out),
            b_out=np.asarray(fn(self.b_out)),
        )

    def combine(self, other: "LstmParameters", fn) -> "LstmParameters":
        return LstmParameters(
            layers=[
                {key: fn(layer[key], other_layer[key]) for key in layer}
                for layer, other_layer in zip(self.layers, other.layers)
            ],
            w_out=fn(self.w_out, other.w_out),
            b_out=np.asarray(fn(self.b_out, other.b_out)),
        )

    def flatten(self) -> np.ndarray:
        return np.concatenate([np.ravel(t) for _, t in self.named_tensors()])

    def unflatten(self, vector: np.ndarray) -> "LstmParameters":
        """按 named_tensors 顺序把一维向量还原成同形状参数。"""
        vector = np.asarray(vector, dtype=np.float64)
        offset = 0
        pieces = {}
        for name, t in self.named_tensors():
            size = int(np.size(t))
            pieces[name] = vector[offset:offset + size].reshape(np.shape(t)).copy()
            offset += size
        if offset != vector.size:
            raise ValidationError(f"向量长度 {vector.size} 与参数总数 {offset} 不符")
        layers = [
            {key: pieces[f"layers.{k}.{key}"] for key in WEIGHT_KEYS + BIAS_KEYS}
            for k in range(self.num_layers)
        ]
        return LstmParameters(layers=layers, w_out=pieces["w_out"], b_out=np.asarray(pieces["b_out"]))

    def global_norm(self) -> float:
        return float(np.sqrt(sum(float(np.sum(np.square(t))) for _, t in self.named_tensors())))

    def is_finite(self) -> bool:
        return all(bool(np.all(np.isfinite(t))) for _, t in self.named_tensors())

    def check_shapes(self, config: LstmConfig) -> None:
        h = config.hidden_size
        if self.num_layers != config.num_layers or self.hidden_size != h:
            raise ValidationError(
                f"参数结构 (layers={self.num_layers}, hidden={self.hidden_size}) 与配置不符"
            )
        for k, layer in enumerate(self.layers):
            width = config.layer_input_size(k) + h
            for key in WEIGHT_KEYS:
                if layer[key].shape != (h, width):
                    raise ValidationError(f"layers.{k}.{key} 形状 {layer[key].shape} != {(h, width)}")
            for key in BIAS_KEYS:
                if layer[key].shape != (h,):
                    raise ValidationError(f"layers.{k}.{key} 形状 {layer[key].shape} != {(h,)}")


def zeros(config: LstmConfig) -> LstmParameters:
    """全零参数（含遗忘门偏置为 0），用于测试与梯度累加。"""
    h = config.hidden_size
    layers = []
    for k in range(config.num_layers):
        width = config.layer_input_size(k) + h
        layer = {key: np.zeros((h, width)) for key in WEIGHT_KEYS}
        layer.update({key: np.zeros(h) for key in BIAS_KEYS})
        layers.append(layer)
    return LstmParameters(layers=layers, w_out=np.zeros(h), b_out=np.asarray(0.0))


def init_parameters(config: LstmConfig) -> LstmParameters:
    """
    权重 ~ U[-1/sqrt(fan_in), 1/sqrt(fan_in)]，fan_in 为矩阵列数；
    偏置为 0，遗忘门偏置为 FORGET_BIAS_INIT。同一 seed 结果一致。
    """
    rng = np.random.default_rng(config.seed)
    h = config.hidden_size
    layers = []
    for k in range(config.num_layers):
        width = config.layer_input_size(k) + h
        bound = 1.0 / np.sqrt(width)
        layer = {key: rng.uniform(-bound, bound, size=(h, width)) for key in WEIGHT_KEYS}
        layer.update({key: np.zeros(h) for key in BIAS_KEYS})
        layer["b_f"] = np.full(h, FORGET_BIAS_INIT)
        layers.append(layer)
    bound = 1.0 / np.sqrt(h)
    w_out = rng.uniform(-bound, bound, size=h)
    return LstmParameters(layers=layers, w_out=w_out, b_out=np.asarray(0.0))
