#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@File    : report_table.py
@Description: 读取 comparison.json 或 train_report.json，打印对齐的指标表（模型 × 分区 × MSE/MAE/R²/Pearson）。
"""
import argparse
import sys
from pathlib import Path

# 项目根目录
_TOOLS_DIR = Path(__file__).resolve().parent
_PROJECT_ROOT = _TOOLS_DIR.parent
if str(_PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(_PROJECT_ROOT))

from services.metrics import render_table, report_from_dict
from utils.errors import ForecastError, SerializationError
from utils.serialization import load_json


def table_from_document(doc: dict) -> str:
    if doc.get("format") == "lstm-rf/comparison":
        models = doc["models"]
    elif doc.get("format") == "lstm-rf/train-report":
        models = {"hybrid": doc["metrics"]}
    else:
        raise SerializationError(f"不支持的报告类型: {doc.get('format')!r}")
    return render_table({
        name: {part: report_from_dict(m) for part, m in parts.items()}
        for name, parts in models.items()
    })


def main() -> int:
    parser = argparse.ArgumentParser(description="打印指标对比表")
    parser.add_argument("report", help="comparison.json 或 train_report.json")
    args = parser.parse_args()
    try:
        print(table_from_document(load_json(args.report)))
    except ForecastError as e:
        print(e.one_line(), file=sys.stderr)
        return e.exit_code
    except (KeyError, TypeError) as e:
        print(SerializationError(f"报告字段缺失: {e}").one_line(), file=sys.stderr)
        return SerializationError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
