"""
文件加载器模块

负责全部磁盘输入格式：
1. JSONL 评测清单（每行一条语句）
2. JSONL 注意力样本（每行一个词出现）
3. 相关分析表格（CSV/TSV 用pandas读取；xlsx 优先openpyxl，失败时降级到calamine引擎）
4. 已写出的JSON报告
"""

import json
import logging
import math
from pathlib import Path
from typing import Any, Union

import pandas as pd
from openpyxl import load_workbook

from .exceptions import FileLoadError, ManifestError
from .types import AttentionCase, Utterance
from .utils.encoding_utils import decode_utf8, detect_encoding
from .utils.text_utils import clean_control_chars
from .utils.validation import TABLE_EXTENSIONS, validate_file_path

logger = logging.getLogger(__name__)

REQUIRED_FIELDS = ("id", "reference", "hypothesis", "duration_s")
OPTIONAL_FIELDS = ("language", "script")
CASE_FIELDS = ("matrix", "k", "span", "word_id")

_UTF8_BOM = b"\xef\xbb\xbf"


class FileLoader:
    """
    文件加载器

    清单按行严格校验，出错时报告行号与语句ID
    """

    def _read_bytes(self, path: Union[str, Path]) -> bytes:
        file_path = validate_file_path(path)
        try:
            with open(file_path, "rb") as f:
                content = f.read()
            logger.debug(f"成功读取文件: {file_path} ({len(content)} bytes)")
            return content
        except OSError as e:
            raise FileLoadError(f"读取文件失败: {file_path}") from e

    def _iter_json_lines(self, content: bytes):
        """逐行解码并解析JSON，产出 (行号, 对象)；空白行跳过"""
        if content.startswith(_UTF8_BOM):
            logger.debug("去除UTF-8 BOM")
            content = content[len(_UTF8_BOM):]

        for line_no, raw in enumerate(content.split(b"\n"), 1):
            text, problem = decode_utf8(raw)
            if problem:
                raise ManifestError(problem, line_no)
            if text.endswith("\r"):
                text = text[:-1]
            if not text.strip():
                continue
            try:
                record = json.loads(text)
            except json.JSONDecodeError as e:
                raise ManifestError(f"JSON格式错误: {e.msg}（第{e.colno}列）", line_no) from e
            if not isinstance(record, dict):
                raise ManifestError("每行必须是一个JSON对象", line_no)
            yield line_no, record

    def _parse_utterance(self, record: dict, line_no: int) -> Utterance:
        utt_id = record.get("id")
        if utt_id is not None and not isinstance(utt_id, str):
            raise ManifestError(f"id 必须是字符串: {utt_id!r}", line_no)

        missing = [name for name in REQUIRED_FIELDS if name not in record]
        if missing:
            raise ManifestError(f"缺少必需字段: {', '.join(missing)}", line_no, utt_id)

        for name in ("reference", "hypothesis"):
            if not isinstance(record[name], str):
                raise ManifestError(f"{name} 必须是字符串", line_no, utt_id)

        duration = record["duration_s"]
        if isinstance(duration, bool) or not isinstance(duration, (int, float)):
            raise ManifestError(f"duration_s 必须是数值: {duration!r}", line_no, utt_id)
        if not math.isfinite(duration):
            raise ManifestError(f"duration_s 必须是有限数值: {duration}", line_no, utt_id)
        if duration < 0:
            raise ManifestError(f"语句 {utt_id} 的时长为负: {duration}", line_no, utt_id)

        extras = {}
        for name in OPTIONAL_FIELDS:
            value = record.get(name)
            if value is not None and not isinstance(value, str):
                raise ManifestError(f"{name} 必须是字符串", line_no, utt_id)
            extras[name] = value

        unknown = set(record) - set(REQUIRED_FIELDS) - set(OPTIONAL_FIELDS)
        if unknown:
            logger.debug(f"第{line_no}行忽略未知字段: {', '.join(sorted(unknown))}")

        return Utterance(
            id=utt_id,
            reference=record["reference"],
            hypothesis=record["hypothesis"],
            duration_s=float(duration),
            **extras,
        )

    def read_manifest(self, path: Union[str, Path]) -> list[Utterance]:
        """
        读取JSONL评测清单

        Args:
            path: 清单路径

        Returns:
            语句列表（与文件顺序一致）

        Raises:
            FileLoadError: 文件不存在或无法读取
            ManifestError: 行格式错误、缺少字段、非UTF-8、时长为负、ID重复
        """
        content = self._read_bytes(path)
        utterances: list[Utterance] = []
        seen: dict[str, int] = {}

        for line_no, record in self._iter_json_lines(content):
            utt = self._parse_utterance(record, line_no)
            if utt.id in seen:
                raise ManifestError(f"ID重复（首次出现于第{seen[utt.id]}行）", line_no, utt.id)
            seen[utt.id] = line_no
            utterances.append(utt)

        logger.info(f"✅ 清单加载成功: {path}，共 {len(utterances)} 条语句")
        return utterances

    def read_cases(self, path: Union[str, Path]) -> list[AttentionCase]:
        """
        读取JSONL注意力样本

        每行: {"word_id": ..., "matrix": [[...], ...], "k": ..., "span": [m, n]}

        Raises:
            ManifestError: 字段缺失或类型不符（报告行号）
        """
        content = self._read_bytes(path)
        cases: list[AttentionCase] = []

        for line_no, record in self._iter_json_lines(content):
            word_id = record.get("word_id")
            missing = [name for name in CASE_FIELDS if name not in record]
            if missing:
                raise ManifestError(f"缺少必需字段: {', '.join(missing)}", line_no, word_id)

            matrix = record["matrix"]
            if not isinstance(matrix, list) or not all(isinstance(row, list) for row in matrix):
                raise ManifestError("matrix 必须是二维数组（行优先）", line_no, word_id)
            widths = {len(row) for row in matrix}
            if len(widths) > 1:
                raise ManifestError("matrix 各行长度不一致", line_no, word_id)

            span = record["span"]
            if not isinstance(span, list) or len(span) != 2:
                raise ManifestError("span 必须是 [m, n]", line_no, word_id)
            if not isinstance(record["k"], int) or not all(isinstance(v, int) for v in span):
                raise ManifestError("k 与 span 必须是整数", line_no, word_id)

            try:
                rows = tuple(tuple(float(v) for v in row) for row in matrix)
            except (TypeError, ValueError) as e:
                raise ManifestError("matrix 含非数值元素", line_no, word_id) from e

            cases.append(AttentionCase(
                matrix=rows,
                target_pron_len=record["k"],
                target_span=(span[0], span[1]),
                word_id=str(word_id),
            ))

        logger.info(f"✅ 注意力样本加载成功: {path}，共 {len(cases)} 个")
        return cases

    def read_table(self, path: Union[str, Path]) -> pd.DataFrame:
        """
        读取相关分析表格

        - .csv / .tsv: pandas读取（编码由chardet检测）
        - .xlsx: 第一层openpyxl，失败时第二层pandas + calamine引擎

        Raises:
            FileLoadError: 所有引擎都失败
        """
        file_path = validate_file_path(path, TABLE_EXTENSIONS)
        suffix = file_path.suffix.lower()

        if suffix == ".xlsx":
            df = self._load_excel(file_path)
        else:
            content = self._read_bytes(file_path)
            encoding = detect_encoding(content)
            try:
                df = pd.read_csv(file_path, sep="\t" if suffix == ".tsv" else ",", encoding=encoding)
            except Exception as e:
                raise FileLoadError(f"表格加载失败: {file_path}: {e}") from e

        df.columns = [clean_control_chars(str(c)).strip() for c in df.columns]
        logger.info(f"✅ 表格加载成功: {len(df)} 行 × {len(df.columns)} 列")
        return df

    def _load_excel(self, file_path: Path) -> pd.DataFrame:
        # 第一层：openpyxl
        try:
            logger.debug("尝试使用openpyxl加载...")
            wb = load_workbook(file_path, data_only=True, read_only=True)
            rows = list(wb.active.iter_rows(values_only=True))
            wb.close()
            rows = [r for r in rows if any(v is not None for v in r)]
            if not rows:
                return pd.DataFrame()
            return pd.DataFrame(list(rows[1:]), columns=list(rows[0]))
        except Exception as e:
            logger.warning(f"openpyxl加载失败: {e}")

        # 第二层：pandas + calamine引擎
        try:
            logger.debug("尝试使用pandas + calamine引擎加载...")
            return pd.read_excel(file_path, engine="calamine")
        except Exception as e:
            logger.error(f"pandas + calamine引擎加载失败: {e}")
            raise FileLoadError("所有Excel加载引擎都失败了。请检查文件是否损坏。") from e

    def read_report(self, path: Union[str, Path]) -> dict[str, Any]:
        """读取JSON报告"""
        content = self._read_bytes(path)
        text, problem = decode_utf8(content)
        if problem:
            raise FileLoadError(f"{path}: {problem}")
        try:
            return json.loads(text)
        except json.JSONDecodeError as e:
            raise FileLoadError(f"报告不是合法JSON: {path}: {e.msg}") from e


_default_loader = FileLoader()


def read_manifest(path: Union[str, Path]) -> list[Utterance]:
    """读取JSONL评测清单"""
    return _default_loader.read_manifest(path)


def read_cases(path: Union[str, Path]) -> list[AttentionCase]:
    """读取JSONL注意力样本"""
    return _default_loader.read_cases(path)


def read_table(path: Union[str, Path]) -> pd.DataFrame:
    """读取相关分析表格"""
    return _default_loader.read_table(path)


def read_report(path: Union[str, Path]) -> dict[str, Any]:
    """读取JSON报告"""
    return _default_loader.read_report(path)
