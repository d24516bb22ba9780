"""
验证工具模块

提供文件路径、选项取值等验证功能
"""

import logging
from pathlib import Path
from typing import Iterable, Union

from ..exceptions import FileLoadError, ValidationError
from ..types import ScoreOptions

logger = logging.getLogger(__name__)

SUPPORTED_SLICES = ("grapheme", "codepoint", "word")
SUPPORTED_NORMS = ("none", "nfc", "nfd")
SUPPORTED_AGGREGATIONS = ("pooled", "macro", "both")
SUPPORTED_TAU_SOURCES = ("reference", "hypothesis")
SUPPORTED_GROUP_BY = ("none", "language", "script")

# 相关分析表格支持的扩展名
TABLE_EXTENSIONS = {".csv", ".tsv", ".xlsx"}


def validate_file_path(file_path: Union[str, Path], extensions: Iterable[str] = ()) -> Path:
    """
    验证输入文件路径

    Args:
        file_path: 文件路径
        extensions: 允许的扩展名（空表示不限制）

    Returns:
        验证后的Path对象

    Raises:
        FileLoadError: 文件不存在或不是文件
        ValidationError: 扩展名不受支持
    """
    path = Path(file_path)

    if not path.exists():
        raise FileLoadError(f"文件不存在: {path}")

    if not path.is_file():
        raise FileLoadError(f"路径不是文件: {path}")

    allowed = set(extensions)
    if allowed and path.suffix.lower() not in allowed:
        raise ValidationError(
            f"不支持的文件类型: {path.suffix}，"
            f"支持的类型: {', '.join(sorted(allowed))}"
        )

    logger.debug(f"文件路径验证通过: {path}")
    return path


def validate_choice(name: str, value: str, choices: Iterable[str]) -> str:
    """
    验证选项取值

    Raises:
        ValidationError: 取值不在允许范围内
    """
    choices = tuple(choices)
    if value not in choices:
        raise ValidationError(f"不支持的{name}: {value}，支持: {', '.join(choices)}")
    return value


def validate_score_options(options: ScoreOptions) -> ScoreOptions:
    """验证评分选项"""
    validate_choice("--slices", options.slices, SUPPORTED_SLICES)
    validate_choice("--norm", options.norm, SUPPORTED_NORMS)
    validate_choice("--aggregation", options.aggregation, SUPPORTED_AGGREGATIONS)
    validate_choice("--tau-source", options.tau_source, SUPPORTED_TAU_SOURCES)
    validate_choice("--group-by", options.group_by, SUPPORTED_GROUP_BY)
    if options.workers < 1:
        raise ValidationError(f"--workers 必须 ≥ 1: {options.workers}")
    return options
