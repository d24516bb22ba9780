"""
命令行入口

子命令:
  score     清单评分（CER / CEPS，JSON 或 Markdown 报告）
  stats     字素清单大小与一元熵
  corr      Pearson相关矩阵（CSV/TSV/xlsx 表格输入）
  spread    注意力扩散 S_w / S_token
  simulate  泊松点过程模拟 / 二编码实验
  curve     CEPS 与 p/τ 的对照曲线（CSV）

退出码: 0 成功；1 校验错误（含 p ≥ 1 未截断）；2 读写错误或参数错误
"""

import argparse
import logging
import sys
from dataclasses import fields
from typing import Optional, Sequence

from .converter import FormatConverter
from .evaluator import CepsEvaluator
from .exceptions import CepsEvalError, InputOutputError, ValidationError
from .types import ScoreOptions, SegmentationScheme, SimConfig
from .utils.validation import (
    SUPPORTED_AGGREGATIONS,
    SUPPORTED_GROUP_BY,
    SUPPORTED_NORMS,
    SUPPORTED_SLICES,
    SUPPORTED_TAU_SOURCES,
)
from .version import __version__

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def _add_scheme_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--slices", choices=SUPPORTED_SLICES, default="grapheme", help="切片单位（默认: grapheme）")
    parser.add_argument("--norm", choices=SUPPORTED_NORMS, default="nfc", help="Unicode规范化（默认: nfc）")


def _add_output_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-o", "--output", help="输出文件路径（默认输出到标准输出）")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ceps-eval",
        description="跨语言ASR评测工具：CER / CEPS（校准每秒错误数）",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
示例:
  python -m ceps_eval score --manifest m.jsonl --aggregation both -o report.json
  python -m ceps_eval corr --table results.csv --format markdown
  python -m ceps_eval simulate --lambda 2 --duration 10000 --tau 0.05 0.1 0.3 --seed 0
  python -m ceps_eval curve --points 3
        """,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="输出调试日志")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="只输出警告和错误")

    sub = parser.add_subparsers(dest="command", metavar="{score,stats,corr,spread,simulate,curve}")
    sub.required = True

    score = sub.add_parser("score", help="清单评分")
    score.add_argument("--manifest", required=True, help="JSONL评测清单")
    _add_scheme_flags(score)
    score.add_argument("--aggregation", choices=SUPPORTED_AGGREGATIONS, default="pooled", help="聚合方式（默认: pooled）")
    score.add_argument("--clamp", action="store_true", help="p ≥ 1 时截断到 1-1e-6 并在报告中标记")
    score.add_argument("--tau-source", choices=SUPPORTED_TAU_SOURCES, default="reference", help="τ 的切片数来源（默认: reference）")
    score.add_argument("--strip-punct", action="store_true", help="按Unicode标点类别去除标点")
    score.add_argument("--strip-whitespace", action="store_true", help="字符模式下丢弃空白切片")
    score.add_argument("--group-by", choices=SUPPORTED_GROUP_BY, default="none", help="按语言或文字系统分组")
    score.add_argument("--workers", type=int, default=1, help="编辑距离并发数（默认: 1）")
    score.add_argument("--format", choices=("json", "markdown"), default="json", help="输出格式（默认: json）")
    _add_output_flag(score)

    stats = sub.add_parser("stats", help="字素清单统计")
    stats.add_argument("--manifest", required=True, help="JSONL评测清单")
    _add_scheme_flags(stats)
    stats.add_argument("--field", choices=("reference", "hypothesis"), default="reference", help="统计的文本字段")
    stats.add_argument("--keep-whitespace", action="store_true", help="把空白切片计入清单")
    _add_output_flag(stats)

    corr = sub.add_parser("corr", help="Pearson相关矩阵")
    corr.add_argument("--table", required=True, help="CSV/TSV/xlsx 表格")
    corr.add_argument("--columns", help="参与计算的列，逗号分隔（默认全部数值列）")
    corr.add_argument("--alpha", type=float, default=0.05, help="显著性阈值（默认: 0.05）")
    corr.add_argument("--format", choices=("json", "markdown"), default="json", help="输出格式（默认: json）")
    _add_output_flag(corr)

    spread = sub.add_parser("spread", help="注意力扩散")
    spread.add_argument("--cases", required=True, help="JSONL注意力样本")
    spread.add_argument("--transpose", action="store_true", help="矩阵行为编码端、列为解码端时使用")
    _add_output_flag(spread)

    simulate = sub.add_parser("simulate", help="泊松点过程模拟")
    simulate.add_argument("--experiment", choices=("process", "two-encoding"), default="process", help="实验类型（默认: process）")
    simulate.add_argument("--config", help="SimConfig JSON文件（命令行参数优先）")
    simulate.add_argument("--lambda", dest="lambda_true", type=float, help="真实每秒错误数（默认: 2.0）")
    simulate.add_argument("--duration", dest="duration_s", type=float, help="总时长秒数（默认: 10000）")
    simulate.add_argument("--tau", dest="tau_list", type=float, nargs="+", help="切片长度列表（默认: 0.05 0.1 0.3）")
    simulate.add_argument("--trials", type=int, help="重复次数（默认: 50）")
    simulate.add_argument("--seed", type=int, help="随机种子（默认: 0）")
    simulate.add_argument("--syllables", type=int, default=10_000, help="二编码实验的音节数")
    simulate.add_argument("--corruption", choices=("neighbor", "random"), default="neighbor", help="二编码实验的破坏方式")
    simulate.add_argument("--corruption-rate", type=float, default=0.1, help="每音节错误事件数（默认: 0.1）")
    _add_output_flag(simulate)

    curve = sub.add_parser("curve", help="CEPS曲线（CSV）")
    curve.add_argument("--points", type=int, required=True, help="采样点数（≥ 2）")
    curve.add_argument("--p-max", type=float, default=0.9, help="p 的上限（默认: 0.9）")
    curve.add_argument("--tau", type=float, default=1.0, help="每切片秒数（默认: 1）")
    _add_output_flag(curve)

    return parser


def _emit(text: str, output: Optional[str], converter: FormatConverter) -> None:
    if output:
        converter.write_text(text, output)
    else:
        sys.stdout.write(text)


def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _coerce_sim_field(name: str, value, source: str):
    """按 SimConfig 字段类型转换配置值，类型不符时抛出 ValidationError"""
    if name in ("lambda_true", "duration_s"):
        if not _is_number(value):
            raise ValidationError(f"{source} 字段 {name} 必须是数值: {value!r}")
        return float(value)
    if name in ("trials", "seed"):
        if not isinstance(value, int) or isinstance(value, bool):
            raise ValidationError(f"{source} 字段 {name} 必须是整数: {value!r}")
        return value
    if not isinstance(value, (list, tuple)) or not all(_is_number(v) for v in value):
        raise ValidationError(f"{source} 字段 {name} 必须是数值列表: {value!r}")
    return tuple(float(v) for v in value)


def _sim_config(args: argparse.Namespace, evaluator: CepsEvaluator) -> SimConfig:
    values: dict = {}
    if args.config:
        data = evaluator.loader.read_report(args.config)
        if not isinstance(data, dict):
            raise ValidationError(f"--config 必须是JSON对象: {args.config}")
        known = {f.name for f in fields(SimConfig)}
        unknown = set(data) - known
        if unknown:
            raise ValidationError(f"--config 含未知字段: {', '.join(sorted(unknown))}")
        for name, value in data.items():
            values[name] = _coerce_sim_field(name, value, "--config")
    for name in ("lambda_true", "duration_s", "tau_list", "trials", "seed"):
        value = getattr(args, name)
        if value is not None:
            values[name] = _coerce_sim_field(name, value, "命令行参数")
    if values.get("seed", 0) < 0:
        raise ValidationError(f"seed（--seed 或 --config）必须 ≥ 0: {values['seed']}")
    return SimConfig(**values)


def _dispatch(args: argparse.Namespace) -> None:
    evaluator = CepsEvaluator()
    converter = evaluator.converter
    output = getattr(args, "output", None)

    if args.command == "score":
        options = ScoreOptions(
            slices=args.slices,
            norm=args.norm,
            aggregation=args.aggregation,
            clamp=args.clamp,
            tau_source=args.tau_source,
            strip_punct=args.strip_punct,
            strip_whitespace=args.strip_whitespace,
            group_by=args.group_by,
            workers=args.workers,
        )
        report = evaluator.score(args.manifest, options)
        text = converter.report_to_markdown(report) if args.format == "markdown" else converter.to_json(report)
        _emit(text, output, converter)

    elif args.command == "stats":
        scheme = SegmentationScheme(kind=args.slices, normalization=args.norm)
        result = evaluator.stats(args.manifest, scheme, field=args.field, keep_whitespace=args.keep_whitespace)
        _emit(converter.to_json(result), output, converter)

    elif args.command == "corr":
        columns = [c.strip() for c in args.columns.split(",")] if args.columns else None
        matrix = evaluator.corr(args.table, columns=columns, alpha=args.alpha)
        text = converter.corr_to_markdown(matrix) if args.format == "markdown" else converter.to_json(matrix)
        _emit(text, output, converter)

    elif args.command == "spread":
        result = evaluator.spread(args.cases, transpose=args.transpose)
        _emit(converter.to_json(result), output, converter)

    elif args.command == "simulate":
        if args.seed is not None and args.seed < 0:
            raise ValidationError(f"--seed 必须 ≥ 0: {args.seed}")
        if args.experiment == "two-encoding":
            result = evaluator.two_encoding(
                seed=args.seed if args.seed is not None else 0,
                syllables=args.syllables,
                corruption_rate=args.corruption_rate,
                corruption=args.corruption,
            )
        else:
            result = evaluator.simulate(_sim_config(args, evaluator))
        _emit(converter.to_json(result), output, converter)

    elif args.command == "curve":
        points = evaluator.curve(args.points, p_max=args.p_max, tau=args.tau)
        _emit(converter.curve_to_csv(points), output, converter)


def _configure_logging(args: argparse.Namespace) -> None:
    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)
    logging.getLogger().setLevel(level)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    执行命令行

    Args:
        argv: 参数列表（默认取 sys.argv[1:]）

    Returns:
        退出码
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse 的 --help/--version 以0退出，用法错误以2退出
        return int(e.code or 0)

    _configure_logging(args)

    try:
        _dispatch(args)
    except InputOutputError as e:
        logger.debug("读写失败", exc_info=True)
        print(f"❌ 错误: {e}", file=sys.stderr)
        return EXIT_IO
    except CepsEvalError as e:
        logger.debug("校验失败", exc_info=True)
        print(f"❌ 错误: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
