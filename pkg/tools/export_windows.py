#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@File    : export_windows.py
@Description: 调试工具：把输入 CSV 做标准化 + 滑动窗口后导出为 w0..w{L-1},label_norm,label_orig。
              用法: python tools/export_windows.py --input data/synthetic.csv --window-len 30 --output windows.csv
"""
import argparse
import sys
from pathlib import Path

# 项目根目录
_TOOLS_DIR = Path(__file__).resolve().parent
_PROJECT_ROOT = _TOOLS_DIR.parent
if str(_PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(_PROJECT_ROOT))

from config.settings import DATE_COLUMN, TARGET_COLUMN, TRAIN_FRACTION, WINDOW_LEN
from src.dataio import export_windows_csv, fit_normalizers, load_series, make_windows
from utils.errors import ForecastError


def export(input_path, output_path, window_len: int, target_column: str, date_column: str,
           train_fraction: float = TRAIN_FRACTION, fit_norm_on_train: bool = False) -> Path:
    series = load_series(input_path, target_column, date_column)
    params, _ = fit_normalizers(series, window_len, train_fraction, fit_norm_on_train)
    return export_windows_csv(make_windows(series, window_len, params), output_path)


def main() -> int:
    parser = argparse.ArgumentParser(description="导出滑动窗口样本 CSV")
    parser.add_argument("--input", required=True)
    parser.add_argument("--output", required=True)
    parser.add_argument("--window-len", type=int, default=WINDOW_LEN)
    parser.add_argument("--target-column", default=TARGET_COLUMN)
    parser.add_argument("--date-column", default=DATE_COLUMN)
    parser.add_argument("--fit-norm-on-train", action="store_true", help="只用训练行拟合标准化参数")
    args = parser.parse_args()
    try:
        path = export(args.input, args.output, args.window_len, args.target_column, args.date_column,
                      fit_norm_on_train=args.fit_norm_on_train)
    except ForecastError as e:
        print(e.one_line(), file=sys.stderr)
        return e.exit_code
    print(f"已导出 -> {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
