#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@File       : serialization.py
@Description: 版本化 JSON 文档与 64 位浮点的无损编码。
              浮点以 float.hex() 字符串保存，读回 bit-exact；数组保存为 shape + 行优先的值列表。
"""
import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from config.settings import SCHEMA_VERSION
from utils.errors import DataIOError, SerializationError


def encode_float(value: Optional[float]) -> Optional[str]:
    if value is None:
        return None
    return float(value).hex()


def decode_float(text: Optional[str]) -> Optional[float]:
    if text is None:
        return None
    try:
        return float.fromhex(text)
    except (TypeError, ValueError) as e:
        raise SerializationError(f"无法解析浮点数 {text!r}: {e}") from e


def encode_array(arr: np.ndarray) -> Dict[str, Any]:
    """ndarray -> {"shape": [...], "values": [hex, ...]}（行优先）。"""
    a = np.asarray(arr, dtype=np.float64)
    return {"shape": list(a.shape), "values": [v.hex() for v in a.ravel(order="C").tolist()]}


def decode_array(doc: Dict[str, Any]) -> np.ndarray:
    try:
        shape = tuple(int(s) for s in doc["shape"])
        values = [float.fromhex(v) for v in doc["values"]]
    except (KeyError, TypeError, ValueError) as e:
        raise SerializationError(f"数组字段损坏: {e}") from e
    expected = int(np.prod(shape)) if shape else 1
    if len(values) != expected:
        raise SerializationError(f"数组长度 {len(values)} 与 shape {shape} 不符")
    return np.array(values, dtype=np.float64).reshape(shape)


def encode_float_list(values: Sequence[float]) -> List[str]:
    return [float(v).hex() for v in values]


def decode_float_list(values: Sequence[str]) -> List[float]:
    return [decode_float(v) for v in values]


def make_document(kind: str, body: Dict[str, Any]) -> Dict[str, Any]:
    """带 format/version 头的文档。"""
    doc = {"format": kind, "version": SCHEMA_VERSION}
    doc.update(body)
    return doc


def check_document(doc: Any, kind: str) -> Dict[str, Any]:
    """校验 format 与 version，不匹配抛 SerializationError。"""
    if not isinstance(doc, dict):
        raise SerializationError(f"{kind}: 文档不是 JSON 对象")
    if doc.get("format") != kind:
        raise SerializationError(f"文档类型不符: 期望 {kind}，实际 {doc.get('format')!r}")
    if doc.get("version") != SCHEMA_VERSION:
        raise SerializationError(f"{kind}: 不支持的版本 {doc.get('version')!r}（当前 {SCHEMA_VERSION}）")
    return doc


def dump_json(obj: Any, path: Path) -> Path:
    """写 JSON，固定缩进与键顺序，保证同输入字节一致。"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(obj, f, ensure_ascii=False, indent=2, allow_nan=False)
        f.write("\n")
    return path


def load_json(path: Path) -> Any:
    path = Path(path)
    if not path.is_file():
        raise DataIOError(f"文件不存在: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise SerializationError(f"JSON 损坏 {path}: {e}") from e
    except OSError as e:
        raise DataIOError(f"读取失败 {path}: {e}") from e
