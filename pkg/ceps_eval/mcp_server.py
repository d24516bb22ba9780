"""
CepsEval MCP服务器

基于FastMCP实现的MCP工具服务器，支持AI智能体直接调用评测功能
"""

import logging
import sys
from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path
from typing import Optional

# 处理相对导入和直接运行的兼容性
if __name__ == "__main__":
    sys.path.insert(0, str(Path(__file__).parent.parent))
    from ceps_eval.evaluator import CepsEvaluator
    from ceps_eval.types import AttentionCase, ScoreOptions, SegmentationScheme, SimConfig
else:
    from .evaluator import CepsEvaluator
    from .types import AttentionCase, ScoreOptions, SegmentationScheme, SimConfig

from fastmcp import FastMCP

# 配置日志
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

# 创建MCP服务器
mcp = FastMCP("CepsEval")

# 初始化评测器
evaluator = CepsEvaluator()

# 安全配置
ALLOWED_PATHS = [
    "/data",
    "/reports",
    "/tmp",
    "/Users",  # macOS
    "/home",   # Linux
]
MAX_FILE_SIZE = 50 * 1024 * 1024  # 50MB


def validate_file_path(file_path: str) -> bool:
    """验证文件路径是否在允许的目录中"""
    try:
        abs_path = Path(file_path).resolve()
        return any(
            str(abs_path).startswith(allowed)
            for allowed in ALLOWED_PATHS
        )
    except Exception:
        return False


def validate_file_size(file_path: str) -> bool:
    """验证文件大小"""
    try:
        return Path(file_path).stat().st_size <= MAX_FILE_SIZE
    except Exception:
        return False


def _check_input(file_path: str) -> Optional[dict]:
    """输入文件安全检查，不通过时返回错误字典"""
    if not validate_file_path(file_path):
        return {"success": False, "error": f"文件路径不在允许的目录中: {file_path}"}
    if not Path(file_path).exists():
        return {"success": False, "error": f"文件不存在: {file_path}"}
    if not validate_file_size(file_path):
        return {"success": False, "error": f"文件过大（超过50MB）: {file_path}"}
    return None


def _save(text: str, output_path: str) -> dict:
    """保存到文件，只返回元数据"""
    if not validate_file_path(output_path):
        return {"success": False, "error": f"输出路径不在允许的目录中: {output_path}"}
    output_file = evaluator.converter.write_text(text, output_path)
    size = output_file.stat().st_size
    return {
        "success": True,
        "saved_to": str(output_file),
        "file_size": size,
        "message": f"✅ 文件已成功保存到 {output_file}（{size / 1024:.1f} KB）",
    }


@mcp.tool()
def score_manifest(
    file_path: str,
    slices: str = "grapheme",
    norm: str = "nfc",
    aggregation: str = "pooled",
    clamp: bool = False,
    tau_source: str = "reference",
    strip_punct: bool = False,
    strip_whitespace: bool = False,
    group_by: str = "none",
    output_format: str = "json",
    output_path: Optional[str] = None,
) -> dict:
    """
    对JSONL评测清单计算 CER 与 CEPS（校准每秒错误数）

    Args:
        file_path: 清单路径（每行 {id, reference, hypothesis, duration_s}）
        slices: 切片单位 (grapheme/codepoint/word)
        norm: Unicode规范化 (none/nfc/nfd)
        aggregation: 聚合方式 (pooled/macro/both)
        clamp: p ≥ 1 时截断（报告中标记）
        tau_source: τ 的切片数来源 (reference/hypothesis)
        strip_punct: 去除Unicode标点
        strip_whitespace: 字符模式下丢弃空白切片
        group_by: 分组 (none/language/script)
        output_format: json / markdown
        output_path: 输出文件路径（可选；提供时只返回元数据）

    Returns:
        {"success": True, "report": {...}} 或保存后的元数据
    """
    try:
        error = _check_input(file_path)
        if error:
            return error

        logger.info(f"评分清单: {file_path}")
        options = ScoreOptions(
            slices=slices,
            norm=norm,
            aggregation=aggregation,
            clamp=clamp,
            tau_source=tau_source,
            strip_punct=strip_punct,
            strip_whitespace=strip_whitespace,
            group_by=group_by,
        )
        report = evaluator.score(file_path, options)

        if output_path:
            if output_format == "markdown":
                text = evaluator.converter.report_to_markdown(report)
            else:
                text = evaluator.converter.to_json(report)
            return _save(text, output_path)

        result = {"success": True, "report": report.to_dict()}
        if output_format == "markdown":
            result["markdown"] = evaluator.converter.report_to_markdown(report)
        return result

    except Exception as e:
        logger.error(f"评分失败: {e}")
        return {"success": False, "error": str(e)}


@mcp.tool()
def batch_score(
    file_paths: list[str],
    slices: str = "grapheme",
    norm: str = "nfc",
    aggregation: str = "pooled",
    clamp: bool = False,
    max_workers: int = 4,
) -> dict:
    """
    批量评分多个清单（并发处理）

    Args:
        file_paths: 清单路径列表
        slices / norm / aggregation / clamp: 同 score_manifest
        max_workers: 最大并发数

    Returns:
        {"success", "total", "succeeded", "failed", "results": [...]}，结果与输入同序
    """
    try:
        logger.info(f"批量评分: {len(file_paths)} 个清单，并发数: {max_workers}")
        options = ScoreOptions(slices=slices, norm=norm, aggregation=aggregation, clamp=clamp)

        def process_one(path: str) -> dict:
            error = _check_input(path)
            if error:
                return {"file": path, **error}
            try:
                report = evaluator.score(path, options).to_dict()
                return {
                    "file": path,
                    "success": True,
                    "cer": report["cer"],
                    "ceps": report["ceps"],
                    "utterances": len(report["per_utterance"]),
                }
            except Exception as e:
                return {"file": path, "success": False, "error": str(e)}

        results: dict[str, dict] = {}
        with ThreadPoolExecutor(max_workers=max(1, max_workers)) as executor:
            futures = {executor.submit(process_one, path): path for path in file_paths}
            for future in as_completed(futures):
                results[futures[future]] = future.result()

        ordered = [results[path] for path in file_paths]
        succeeded = sum(1 for r in ordered if r.get("success"))
        logger.info(f"✅ 批量评分完成: 成功 {succeeded}/{len(file_paths)}")
        return {
            "success": True,
            "total": len(file_paths),
            "succeeded": succeeded,
            "failed": len(file_paths) - succeeded,
            "results": ordered,
        }

    except Exception as e:
        logger.error(f"批量评分失败: {e}")
        return {"success": False, "error": str(e)}


@mcp.tool()
def corpus_stats(
    file_path: str,
    field: str = "reference",
    slices: str = "grapheme",
    norm: str = "nfc",
    keep_whitespace: bool = False,
) -> dict:
    """
    统计清单文本的字素清单大小 |C| 与一元熵 H(C)（bits）

    Args:
        file_path: 清单路径
        field: reference / hypothesis
        slices: 切片单位
        norm: Unicode规范化
        keep_whitespace: 是否计入空白切片
    """
    try:
        error = _check_input(file_path)
        if error:
            return error
        scheme = SegmentationScheme(kind=slices, normalization=norm)
        result = evaluator.stats(file_path, scheme, field=field, keep_whitespace=keep_whitespace)
        return {"success": True, **result.to_dict()}
    except Exception as e:
        logger.error(f"统计失败: {e}")
        return {"success": False, "error": str(e)}


@mcp.tool()
def correlate(
    file_path: Optional[str] = None,
    table: Optional[dict[str, list[float]]] = None,
    columns: Optional[list[str]] = None,
    alpha: float = 0.05,
    output_format: str = "json",
) -> dict:
    """
    计算Pearson相关矩阵及双尾显著性

    Args:
        file_path: CSV/TSV/xlsx 表格路径（优先使用）
        table: 列名 → 数值列表（file_path 不存在时使用）
        columns: 参与计算的列（默认全部数值列）
        alpha: 显著性阈值
        output_format: json / markdown（markdown 额外返回上三角表格）
    """
    try:
        if file_path:
            error = _check_input(file_path)
            if error:
                return error
            source = file_path
        elif table:
            source = table
        else:
            return {"success": False, "error": "必须提供 file_path 或 table"}

        matrix = evaluator.corr(source, columns=columns, alpha=alpha)
        result = {"success": True, **matrix.to_dict()}
        if output_format == "markdown":
            result["markdown"] = evaluator.converter.corr_to_markdown(matrix)
        return result
    except Exception as e:
        logger.error(f"相关分析失败: {e}")
        return {"success": False, "error": str(e)}


@mcp.tool()
def attention_spread(
    file_path: Optional[str] = None,
    cases: Optional[list[dict]] = None,
    transpose: bool = False,
) -> dict:
    """
    计算注意力扩散 S_w 与语料均值 S_token

    Args:
        file_path: JSONL注意力样本路径（优先使用）
        cases: [{"word_id", "matrix", "k", "span": [m, n]}, ...]
        transpose: 矩阵行为编码端、列为解码端时设为True
    """
    try:
        if file_path:
            error = _check_input(file_path)
            if error:
                return error
            source = file_path
        elif cases:
            source = [
                AttentionCase(
                    matrix=tuple(tuple(float(v) for v in row) for row in case["matrix"]),
                    target_pron_len=int(case["k"]),
                    target_span=(int(case["span"][0]), int(case["span"][1])),
                    word_id=str(case.get("word_id", index)),
                )
                for index, case in enumerate(cases)
            ]
        else:
            return {"success": False, "error": "必须提供 file_path 或 cases"}

        result = evaluator.spread(source, transpose=transpose)
        return {"success": True, **result.to_dict()}
    except Exception as e:
        logger.error(f"注意力扩散计算失败: {e}")
        return {"success": False, "error": str(e)}


@mcp.tool()
def simulate(
    lambda_true: float = 2.0,
    duration_s: float = 10_000.0,
    tau_list: Optional[list[float]] = None,
    seed: int = 0,
    trials: int = 50,
    experiment: str = "process",
    syllables: int = 10_000,
    corruption: str = "neighbor",
    corruption_rate: float = 0.1,
) -> dict:
    """
    蒙特卡洛验证 CEPS 的校准性

    Args:
        lambda_true / duration_s / tau_list / seed / trials: 泊松点过程模拟参数
        experiment: process（点过程模拟）/ two-encoding（韩文音节与字母对比）
        syllables / corruption / corruption_rate: 二编码实验参数
    """
    try:
        if experiment == "two-encoding":
            report = evaluator.two_encoding(
                seed=seed,
                syllables=syllables,
                corruption=corruption,
                corruption_rate=corruption_rate,
            )
            return {"success": True, **report.to_dict()}

        config = SimConfig(
            lambda_true=lambda_true,
            duration_s=duration_s,
            tau_list=tuple(tau_list) if tau_list else SimConfig.tau_list,
            seed=seed,
            trials=trials,
        )
        outcome = evaluator.simulate(config)
        return {"success": True, **outcome.to_dict()}
    except Exception as e:
        logger.error(f"模拟失败: {e}")
        return {"success": False, "error": str(e)}


@mcp.tool()
def ceps_curve(points: int = 10, p_max: float = 0.9, tau: float = 1.0) -> dict:
    """
    CEPS ln(1/(1-p))/τ 与未校准 p/τ 的对照曲线

    Returns:
        {"success", "csv", "points": [{"p", "ceps", "raw"}, ...]}
    """
    try:
        curve = evaluator.curve(points, p_max=p_max, tau=tau)
        return {
            "success": True,
            "csv": evaluator.converter.curve_to_csv(curve),
            "points": [{"p": c.p, "ceps": c.ceps, "raw": c.raw} for c in curve],
        }
    except Exception as e:
        logger.error(f"曲线生成失败: {e}")
        return {"success": False, "error": str(e)}


if __name__ == "__main__":
    # 启动MCP服务器
    logger.info("🚀 启动CepsEval MCP服务器...")
    mcp.run(transport="stdio")
