"""
格式转换器模块

实现评测结果到 JSON / Markdown / CSV 的转换：
- JSON: 固定键顺序、数值保留6位小数，同一报告逐字节一致
- Markdown: 使用pandas的to_markdown()
- CSV: CEPS曲线数据
"""

import json
import logging
from pathlib import Path
from typing import Any, Sequence, Union

import pandas as pd

from .exceptions import ReportWriteError
from .types import CorrMatrix, CurvePoint, EvalReport

logger = logging.getLogger(__name__)

Serializable = Union[dict, Any]


class FormatConverter:
    """
    格式转换器

    支持报告对象转换为JSON、Markdown或CSV文本
    """

    def to_json(self, data: Serializable) -> str:
        """
        序列化为JSON文本

        带 to_dict() 的对象先转换为字典；不输出NaN/Infinity。

        Raises:
            ReportWriteError: 存在无法序列化的值
        """
        if hasattr(data, "to_dict"):
            data = data.to_dict()
        try:
            return json.dumps(data, ensure_ascii=False, indent=2, allow_nan=False) + "\n"
        except (TypeError, ValueError) as e:
            raise ReportWriteError(f"报告序列化失败: {e}") from e

    def write_text(self, text: str, path: Union[str, Path]) -> Path:
        """
        写出文本（UTF-8，LF换行）

        Raises:
            ReportWriteError: 路径不可写
        """
        output = Path(path)
        try:
            with open(output, "w", encoding="utf-8", newline="\n") as f:
                f.write(text)
        except OSError as e:
            raise ReportWriteError(f"无法写入: {output}: {e.strerror or e}") from e
        logger.info(f"✅ 已写出: {output}")
        return output

    def write_report(self, report: Serializable, path: Union[str, Path]) -> Path:
        """写出JSON报告"""
        return self.write_text(self.to_json(report), path)

    def report_to_markdown(self, report: EvalReport) -> str:
        """
        评测报告转换为Markdown

        包含汇总表、可选的分组表与逐条明细表
        """
        logger.info("开始转换为Markdown格式...")
        pooled = report.pooled
        summary = pd.DataFrame([{
            "segmentation": report.segmentation,
            "aggregation": report.aggregation,
            "CER": report.cer,
            "CEPS": report.ceps,
            "pooled λ": pooled.lambda_,
            "macro λ": report.macro,
            "τ": pooled.tau,
            "p": pooled.p,
            "raw p/τ": pooled.raw_rate,
            "T": pooled.n,
            "L (s)": pooled.total_duration_s,
            "E": pooled.total_errors,
        }])
        parts = ["## Summary", "", summary.to_markdown(index=False, floatfmt=".6f")]

        if report.groups:
            groups = pd.DataFrame([{
                "group": g.key,
                "utterances": g.utterances,
                "CER": g.cer,
                "CEPS": g.pooled.lambda_,
                "τ": g.pooled.tau,
            } for g in report.groups])
            parts += ["", "## Groups", "", groups.to_markdown(index=False, floatfmt=".6f")]

        if report.per_utterance:
            rows = pd.DataFrame([{
                "id": u.id,
                "N": u.summary.ref_len,
                "S": u.summary.substitutions,
                "D": u.summary.deletions,
                "I": u.summary.insertions,
                "distance": u.summary.distance,
                "λ": u.estimate.lambda_ if u.estimate else None,
            } for u in report.per_utterance])
            parts += ["", "## Utterances", "", rows.to_markdown(index=False, floatfmt=".6f")]

        if report.warnings:
            parts += ["", "## Warnings", ""] + [f"- {w}" for w in report.warnings]

        return "\n".join(parts) + "\n"

    def corr_to_markdown(self, matrix: CorrMatrix) -> str:
        """
        相关矩阵转换为Markdown（只显示上三角，p < α 的项标注 *）
        """
        cells = []
        size = len(matrix.variables)
        for i in range(size):
            row = []
            for j in range(size):
                if j < i:
                    row.append("")
                elif j == i:
                    row.append("1")
                else:
                    mark = "*" if matrix.p_values[i][j] < matrix.alpha else ""
                    row.append(f"{matrix.r[i][j]:.6f}{mark}")
            cells.append(row)

        df = pd.DataFrame(cells, index=matrix.variables, columns=matrix.variables)
        note = f"\n\n`*` p < {matrix.alpha}（双尾 t 检验，n = {matrix.n}）\n"
        return df.to_markdown(disable_numparse=True) + note

    def curve_to_csv(self, points: Sequence[CurvePoint]) -> str:
        """CEPS曲线转换为CSV（表头 p,ceps,raw）"""
        df = pd.DataFrame(
            [(c.p, c.ceps, c.raw) for c in points],
            columns=["p", "ceps", "raw"],
        )
        return df.to_csv(index=False, float_format="%.6f", lineterminator="\n")


_default_converter = FormatConverter()


def write_report(report: Serializable, path: Union[str, Path]) -> Path:
    """写出JSON报告（同一报告逐字节一致）"""
    return _default_converter.write_report(report, path)


def report_to_markdown(report: EvalReport) -> str:
    return _default_converter.report_to_markdown(report)


def corr_to_markdown(matrix: CorrMatrix) -> str:
    return _default_converter.corr_to_markdown(matrix)


def curve_to_csv(points: Sequence[CurvePoint]) -> str:
    return _default_converter.curve_to_csv(points)
