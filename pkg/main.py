#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
@Description: 命令行入口。子命令 train / predict / compare / tune / importance / synth。
              每次运行由一个 JSON 配置描述（--config），--set key=value 覆盖单个键；
              可预期的错误输出一行 error=<类别> code=<n> detail=<说明> 到 stderr，并以对应退出码退出。
"""
import argparse
import sys
from pathlib import Path
from typing import List, Optional

import pandas as pd

from config.run_config import RunConfig, load_run_config
from config.settings import (
    COMPARE_PREDICTIONS_PREFIX,
    COMPARE_REPORT_FILE_NAME,
    DATE_COLUMN,
    FORECAST_FILE_NAME,
    FORECAST_HORIZON,
    IMPORTANCE_FILE_NAME,
    MODEL_FILE_NAME,
    OUTPUT_DIR,
    PREDICTIONS_FILE_NAME,
    SYNTH_FILE_NAME,
    SYNTH_LENGTH,
    SYNTH_NOISE,
    SYNTH_PERIOD,
    SYNTH_SEED,
    TRAIN_REPORT_FILE_NAME,
    TUNE_LSTM_FILE_NAME,
    TUNE_RF_FILE_NAME,
)
from services.forest import write_importance_csv
from services.hybrid_pipeline import (
    exogenous_importance,
    fit_hybrid,
    forecast_recursive,
    load_model,
    predictions_frame,
    run_baselines,
    save_model,
    write_predictions_csv,
)
from services.metrics import render_table
from services.tuner import (
    LSTM_KEYS,
    RF_KEYS,
    STATUS_OK,
    grid_search_lstm,
    grid_search_rf,
    lstm_stage_features,
    write_grid_csv,
)
from src.dataio import SynthParams, TimeSeries, load_series, write_synthetic_csv
from utils.errors import ForecastError
from utils.logger import get_logger
from utils.serialization import dump_json, make_document

logger = get_logger("Main")

TRAIN_REPORT_FORMAT = "lstm-rf/train-report"
COMPARISON_FORMAT = "lstm-rf/comparison"


def _load_config(args) -> RunConfig:
    flags = {
        "data.input": getattr(args, "input", None),
        "output.dir": getattr(args, "output_dir", None),
        "output.threads": getattr(args, "threads", None),
        "data.fit_norm_on_train": getattr(args, "fit_norm_on_train", None),
    }
    return load_run_config(args.config, overrides=args.set or [], flags=flags)


def _load_series(config: RunConfig, with_exogenous: bool = True) -> TimeSeries:
    data = config.values["data"]
    exo = data["exo_columns"] if with_exogenous else []
    return load_series(config.input_path(), data["target_column"], data["date_column"], exo)


def _uses_exogenous(config: RunConfig) -> bool:
    return config.get("hybrid.include_exogenous")


def cmd_train(config: RunConfig) -> int:
    """训练混合模型，写模型 JSON、训练报告、训练/测试分区预测 CSV。"""
    series = _load_series(config, _uses_exogenous(config))
    out = config.output_dir
    config.write_resolved(out)
    model, report = fit_hybrid(
        series,
        config.lstm_config(),
        config.forest_config(),
        config.fusion(),
        config.get("data.window_len"),
        config.get("data.train_fraction"),
        config.get("data.fit_norm_on_train"),
        config.threads,
    )
    save_model(model, out / MODEL_FILE_NAME)
    dump_json(make_document(TRAIN_REPORT_FORMAT, report.to_dict()), out / TRAIN_REPORT_FILE_NAME)
    frame = predictions_frame(report.train, report.test, report.train_predictions, report.test_predictions)
    write_predictions_csv(frame, out / PREDICTIONS_FILE_NAME)
    print(render_table({"hybrid": {"train": report.train_metrics, "test": report.test_metrics}}))
    logger.info("💾 训练输出已写入 %s", out)
    return 0


def cmd_predict(model_path, input_path, horizon: int, output_dir=None, date_column: str = DATE_COLUMN) -> int:
    """递归多步预测，写 (step, predicted_value) CSV，值为原始尺度。"""
    model = load_model(model_path)
    series = load_series(input_path, model.target_name, date_column, [])
    values = forecast_recursive(model, series, horizon)
    out = Path(output_dir or OUTPUT_DIR)
    out.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame({"step": range(1, horizon + 1), "predicted_value": values})
    frame.to_csv(out / FORECAST_FILE_NAME, index=False, float_format="%.17g", lineterminator="\n")
    print(frame.to_string(index=False))
    logger.info("💾 %d 步预测已写入 %s", horizon, out / FORECAST_FILE_NAME)
    return 0


def cmd_compare(config: RunConfig) -> int:
    """LSTM-only / RF-only / hybrid 在同一划分上对比，写对比报告与各模型预测 CSV。"""
    series = _load_series(config, _uses_exogenous(config))
    out = config.output_dir
    config.write_resolved(out)
    comparison = run_baselines(
        series,
        config.lstm_config(),
        config.forest_config(),
        config.fusion(),
        config.get("data.window_len"),
        config.get("data.train_fraction"),
        config.get("data.fit_norm_on_train"),
        config.threads,
    )
    dump_json(make_document(COMPARISON_FORMAT, comparison.to_dict()), out / COMPARE_REPORT_FILE_NAME)
    for name, run in comparison.runs.items():
        frame = predictions_frame(comparison.train, comparison.test, run.train_predictions, run.test_predictions)
        write_predictions_csv(frame, out / f"{COMPARE_PREDICTIONS_PREFIX}{name}.csv")
    print(render_table(comparison.metrics()))
    return 0


def cmd_tune(config: RunConfig) -> int:
    """
    两阶段网格搜索：先 LSTM 网格（按 Pearson 或 R²），
    再用排名第一的 LSTM 组合提取特征跑 RF 网格（按 R²）。
    """
    series = _load_series(config, _uses_exogenous(config))
    out = config.output_dir
    config.write_resolved(out)
    grid = config.grid()
    epochs = config.get("lstm.epochs")
    fraction = config.get("data.train_fraction")
    fit_norm_on_train = config.get("data.fit_norm_on_train")

    lstm_rows = grid_search_lstm(series, grid, epochs, fraction, fit_norm_on_train, config.threads)
    write_grid_csv(lstm_rows, LSTM_KEYS, out / TUNE_LSTM_FILE_NAME)
    best = lstm_rows[0]
    if best.status != STATUS_OK:
        raise ForecastError("LSTM 网格全部组合失败，无法进入 RF 阶段")
    logger.info("🏆 LSTM 最优组合 %s score=%.6f", best.params, best.score)

    fusion = config.fusion()
    features, labels = lstm_stage_features(series, best.params, best.seed, epochs, fraction, fusion.mode,
                                           fusion.include_exogenous, fit_norm_on_train)
    rf_rows = grid_search_rf(features, labels, grid, fraction, config.forest_config(), config.threads)
    write_grid_csv(rf_rows, RF_KEYS, out / TUNE_RF_FILE_NAME)
    if rf_rows[0].status == STATUS_OK:
        logger.info("🏆 RF 最优组合 %s score=%.6f", rf_rows[0].params, rf_rows[0].score)
    print(f"LSTM 网格 {len(lstm_rows)} 行 -> {out / TUNE_LSTM_FILE_NAME}")
    print(f"RF 网格 {len(rf_rows)} 行 -> {out / TUNE_RF_FILE_NAME}")
    return 0


def cmd_importance(config: RunConfig) -> int:
    """外生变量特征重要性 (MDI)，降序 CSV。"""
    series = _load_series(config, with_exogenous=True)
    out = config.output_dir
    config.write_resolved(out)
    forest = exogenous_importance(
        series,
        config.forest_config(),
        config.get("data.window_len"),
        config.get("data.train_fraction"),
        config.get("data.fit_norm_on_train"),
        config.threads,
    )
    path = write_importance_csv(forest, out / IMPORTANCE_FILE_NAME)
    print(pd.read_csv(path).to_string(index=False))
    return 0


def cmd_synth(params: SynthParams, path) -> int:
    write_synthetic_csv(params.validate(), path)
    return 0


def _add_config_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=None, help="运行配置 JSON（省略则全部使用默认值）")
    parser.add_argument("--set", action="append", metavar="KEY=VALUE", help="覆盖配置键，如 lstm.epochs=50，可重复")
    parser.add_argument("--input", default=None, help="输入 CSV，覆盖 data.input")
    parser.add_argument("--output-dir", default=None, help="输出目录，覆盖 output.dir")
    parser.add_argument("--threads", type=int, default=None, help="工作线程上限，覆盖 output.threads")
    parser.add_argument("--fit-norm-on-train", action="store_true", default=None,
                        help="只用训练行拟合标准化参数，覆盖 data.fit_norm_on_train")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lstm-rf", description="LSTM -> 随机森林混合时间序列预测")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, handler, text in (
        ("train", cmd_train, "训练混合模型"),
        ("compare", cmd_compare, "LSTM-only / RF-only / hybrid 对比"),
        ("tune", cmd_tune, "两阶段网格搜索"),
        ("importance", cmd_importance, "外生变量特征重要性"),
    ):
        p = sub.add_parser(name, help=text)
        _add_config_args(p)
        p.set_defaults(handler=lambda args, h=handler: h(_load_config(args)))

    p = sub.add_parser("predict", help="递归多步预测")
    p.add_argument("--model", required=True, help="模型 JSON")
    p.add_argument("--input", required=True, help="提供最近窗口的 CSV")
    p.add_argument("--horizon", type=int, default=FORECAST_HORIZON)
    p.add_argument("--output-dir", default=None)
    p.add_argument("--date-column", default=DATE_COLUMN)
    p.set_defaults(handler=lambda args: cmd_predict(args.model, args.input, args.horizon, args.output_dir,
                                                    args.date_column))

    p = sub.add_parser("synth", help="生成合成数据集")
    p.add_argument("--length", type=int, default=SYNTH_LENGTH)
    p.add_argument("--noise", type=float, default=SYNTH_NOISE)
    p.add_argument("--seed", type=int, default=SYNTH_SEED)
    p.add_argument("--period", type=float, default=SYNTH_PERIOD)
    p.add_argument("--output", default=None, help=f"输出 CSV，默认 <output.dir>/{SYNTH_FILE_NAME}")
    p.set_defaults(handler=lambda args: cmd_synth(
        SynthParams(length=args.length, period=args.period, noise=args.noise, seed=args.seed),
        args.output or (OUTPUT_DIR / SYNTH_FILE_NAME),
    ))
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ForecastError as e:
        logger.error("❌ %s", e.one_line())
        print(e.one_line(), file=sys.stderr)
        return e.exit_code
    except Exception as e:
        logger.exception("未预期的异常")
        print(ForecastError(f"{type(e).__name__}: {e}").one_line(), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
