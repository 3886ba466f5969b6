#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@File       : run_config.py
@Description: 声明式运行配置 (RunConfig)。
              一个 JSON 文件描述一次运行，命名空间 data.* / lstm.* / forest.* / hybrid.* / tune.* / output.*。
              合并顺序：默认值 <- 配置文件 <- 环境变量 (LSTMRF_SEED / LSTMRF_THREADS) <- --set key=value。
              未知键、类型不符在任何计算之前抛 ValidationError；解析后的完整配置写入输出目录。
"""
import copy
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, Optional

from config.settings import (
    DATE_COLUMN,
    EXO_COLUMNS,
    FIT_NORM_ON_TRAIN,
    FORECAST_HORIZON,
    FUSION_MODE,
    GRAD_CLIP_NORM,
    INCLUDE_EXOGENOUS,
    LSTM_EPOCHS,
    LSTM_HIDDEN_SIZE,
    LSTM_LEARNING_RATE,
    LSTM_NUM_LAYERS,
    OUTPUT_DIR,
    RESOLVED_CONFIG_FILE_NAME,
    RF_BOOTSTRAP,
    RF_MAX_DEPTH,
    RF_MAX_FEATURES,
    RF_MIN_SAMPLES_SPLIT,
    RF_N_ESTIMATORS,
    SEED,
    TARGET_COLUMN,
    THREADS,
    TRAIN_FRACTION,
    TUNE_LSTM_GRID,
    TUNE_LSTM_OBJECTIVE,
    TUNE_RF_GRID,
    TUNE_RF_OBJECTIVE,
    WINDOW_LEN,
)
from services.forest import ForestConfig
from services.hybrid_pipeline import FusionConfig
from services.lstm_engine import LstmConfig
from services.tuner import GridSpec
from utils.errors import ValidationError
from utils.logger import get_logger
from utils.serialization import dump_json, load_json

logger = get_logger(__name__)

# 键 -> (默认值, 类型)
SCHEMA: Dict[str, Dict[str, tuple]] = {
    "data": {
        "input": (None, "path?"),
        "target_column": (TARGET_COLUMN, "str"),
        "date_column": (DATE_COLUMN, "str"),
        "exo_columns": (list(EXO_COLUMNS), "str_list"),
        "window_len": (WINDOW_LEN, "int"),
        "train_fraction": (TRAIN_FRACTION, "float"),
        "fit_norm_on_train": (FIT_NORM_ON_TRAIN, "bool"),
    },
    "lstm": {
        "hidden_size": (LSTM_HIDDEN_SIZE, "int"),
        "num_layers": (LSTM_NUM_LAYERS, "int"),
        "learning_rate": (LSTM_LEARNING_RATE, "float"),
        "epochs": (LSTM_EPOCHS, "int"),
        "clip_norm": (GRAD_CLIP_NORM, "float"),
        "seed": (SEED, "int"),
    },
    "forest": {
        "n_estimators": (RF_N_ESTIMATORS, "int"),
        "max_depth": (RF_MAX_DEPTH, "int?"),
        "min_samples_split": (RF_MIN_SAMPLES_SPLIT, "int"),
        "max_features": (RF_MAX_FEATURES, "max_features"),
        "bootstrap": (RF_BOOTSTRAP, "bool"),
        "seed": (SEED, "int"),
    },
    "hybrid": {
        "fusion_mode": (FUSION_MODE, "str"),
        "include_exogenous": (INCLUDE_EXOGENOUS, "bool"),
        "horizon": (FORECAST_HORIZON, "int"),
    },
    "tune": {
        "lstm_grid": (copy.deepcopy(TUNE_LSTM_GRID), "grid"),
        "rf_grid": (copy.deepcopy(TUNE_RF_GRID), "grid"),
        "lstm_objective": (TUNE_LSTM_OBJECTIVE, "str"),
        "rf_objective": (TUNE_RF_OBJECTIVE, "str"),
        # True: LSTM 阶段也按 R² 排序
        "unify_r2": (False, "bool"),
        "seed": (SEED, "int"),
    },
    "output": {
        "dir": (str(OUTPUT_DIR), "path"),
        "threads": (THREADS, "int"),
    },
}

ENV_SEED = "LSTMRF_SEED"
ENV_THREADS = "LSTMRF_THREADS"
SEED_KEYS = ("lstm.seed", "forest.seed", "tune.seed")


def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _check_value(key: str, value: Any, kind: str) -> Any:
    """按类型校验并规范化单个值；不符抛 ValidationError。"""
    def fail():
        raise ValidationError(f"配置键 {key} 类型错误: 期望 {kind}，实际 {value!r}")

    if kind.endswith("?"):
        if value is None:
            return None
        kind = kind[:-1]
    if kind == "int":
        return value if _is_int(value) else fail()
    if kind == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            fail()
        return float(value)
    if kind == "bool":
        return value if isinstance(value, bool) else fail()
    if kind in ("str", "path"):
        return value if isinstance(value, str) and value else fail()
    if kind == "str_list":
        if not isinstance(value, list) or not all(isinstance(v, str) and v for v in value):
            fail()
        return list(value)
    if kind == "max_features":
        if value is None or value == "all" or (_is_int(value) and value >= 1):
            return value
        fail()
    if kind == "grid":
        if not isinstance(value, dict) or not all(isinstance(v, list) for v in value.values()):
            fail()
        return {k: list(v) for k, v in value.items()}
    fail()


def _parse_scalar(text: str) -> Any:
    """--set 的值先按 JSON 解析（数字、true/false、null、列表），失败则当作字符串。"""
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def parse_override(item: str) -> tuple:
    if "=" not in item:
        raise ValidationError(f"--set 需要 key=value 形式，实际 {item!r}")
    key, _, raw = item.partition("=")
    return key.strip(), _parse_scalar(raw.strip())


def defaults() -> Dict[str, Dict[str, Any]]:
    return {ns: {k: copy.deepcopy(v[0]) for k, v in keys.items()} for ns, keys in SCHEMA.items()}


def _assign(values: Dict[str, Dict[str, Any]], dotted: str, value: Any) -> None:
    ns, _, key = dotted.partition(".")
    if ns not in SCHEMA or key not in SCHEMA[ns]:
        raise ValidationError(f"未知配置键: {dotted}")
    values[ns][key] = _check_value(dotted, value, SCHEMA[ns][key][1])


@dataclass(frozen=True)
class RunConfig:
    """解析并校验后的完整配置；各模块配置对象由此派生。"""

    values: Dict[str, Dict[str, Any]]

    def get(self, dotted: str) -> Any:
        ns, _, key = dotted.partition(".")
        return self.values[ns][key]

    @property
    def output_dir(self) -> Path:
        return Path(self.values["output"]["dir"])

    @property
    def threads(self) -> int:
        return self.values["output"]["threads"]

    def input_path(self) -> Path:
        path = self.values["data"]["input"]
        if path is None:
            raise ValidationError("缺少输入文件: 请在配置中设置 data.input 或使用 --input")
        return Path(path)

    def lstm_config(self) -> LstmConfig:
        v = self.values["lstm"]
        return LstmConfig(
            hidden_size=v["hidden_size"],
            num_layers=v["num_layers"],
            learning_rate=v["learning_rate"],
            epochs=v["epochs"],
            seed=v["seed"],
            clip_norm=v["clip_norm"],
        )

    def forest_config(self) -> ForestConfig:
        v = self.values["forest"]
        return ForestConfig(
            n_estimators=v["n_estimators"],
            max_depth=v["max_depth"],
            min_samples_split=v["min_samples_split"],
            max_features=v["max_features"],
            seed=v["seed"],
            bootstrap=v["bootstrap"],
        )

    def fusion(self) -> FusionConfig:
        v = self.values["hybrid"]
        return FusionConfig.of(v["fusion_mode"], v["include_exogenous"])

    def grid(self) -> GridSpec:
        v = self.values["tune"]
        return GridSpec(
            lstm_grid=v["lstm_grid"],
            rf_grid=v["rf_grid"],
            lstm_objective="R2" if v["unify_r2"] else v["lstm_objective"],
            rf_objective=v["rf_objective"],
            seed=v["seed"],
        )

    def validate(self) -> "RunConfig":
        """构造各模块配置对象（它们各自校验），再检查跨键约束。"""
        data = self.values["data"]
        if data["window_len"] < 1:
            raise ValidationError(f"data.window_len 必须 >= 1，实际 {data['window_len']}")
        if not 0.0 < data["train_fraction"] < 1.0:
            raise ValidationError(f"data.train_fraction 必须在 (0, 1) 内，实际 {data['train_fraction']}")
        if len(set(data["exo_columns"])) != len(data["exo_columns"]):
            raise ValidationError(f"data.exo_columns 有重复: {data['exo_columns']}")
        if self.values["hybrid"]["horizon"] < 1:
            raise ValidationError(f"hybrid.horizon 必须 >= 1，实际 {self.values['hybrid']['horizon']}")
        if self.threads < 1:
            raise ValidationError(f"output.threads 必须 >= 1，实际 {self.threads}")
        self.lstm_config()
        self.forest_config()
        self.fusion()
        self.grid()
        return self

    def to_dict(self) -> Dict[str, Dict[str, Any]]:
        return copy.deepcopy(self.values)

    def write_resolved(self, directory: Optional[Path] = None) -> Path:
        path = Path(directory or self.output_dir) / RESOLVED_CONFIG_FILE_NAME
        return dump_json(self.to_dict(), path)


def _env_overrides(env: Optional[Dict[str, str]] = None) -> Dict[str, Any]:
    env = os.environ if env is None else env
    out: Dict[str, Any] = {}
    for name, keys in ((ENV_SEED, SEED_KEYS), (ENV_THREADS, ("output.threads",))):
        raw = (env.get(name) or "").strip()
        if not raw:
            continue
        try:
            value = int(raw)
        except ValueError as e:
            raise ValidationError(f"环境变量 {name} 必须是整数，实际 {raw!r}") from e
        for key in keys:
            out[key] = value
    return out


def load_run_config(
    path=None,
    overrides: Iterable[str] = (),
    env: Optional[Dict[str, str]] = None,
    flags: Optional[Dict[str, Any]] = None,
) -> RunConfig:
    """
    path: 配置 JSON（可省略，全部用默认值）
    overrides: ["lstm.epochs=50", "hybrid.fusion_mode=HIDDEN", ...]
    flags: 命令行专用参数 (--input / --output-dir / --threads / --fit-norm-on-train) 对应的键值，最后生效
    """
    values = defaults()
    if path is not None:
        doc = load_json(path)
        if not isinstance(doc, dict):
            raise ValidationError(f"配置文件 {path} 顶层必须是 JSON 对象")
        for ns, section in doc.items():
            if ns not in SCHEMA:
                raise ValidationError(f"未知配置命名空间: {ns}")
            if not isinstance(section, dict):
                raise ValidationError(f"配置命名空间 {ns} 必须是 JSON 对象")
            for key, value in section.items():
                _assign(values, f"{ns}.{key}", value)
    for key, value in _env_overrides(env).items():
        _assign(values, key, value)
    for item in overrides:
        key, value = parse_override(item)
        _assign(values, key, value)
    for key, value in (flags or {}).items():
        if value is not None:
            _assign(values, key, value)
    config = RunConfig(values=values).validate()
    logger.info("⚙️ 运行配置已解析: %s", path or "(默认值)")
    return config
