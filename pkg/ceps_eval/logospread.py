"""
注意力扩散（表意度）模块

S_w = Σ(M∘A) / ΣA，掩码 M 在 (i < k 且 m ≤ j ≤ n) 处为0，其余为1；
S_token 为语料中全部词出现的 S_w 的算术平均。

注意力矩阵由上游的音素→字形模型提供，多头注意力的聚合也在上游完成。
"""

import logging
import math
from typing import Sequence

import numpy as np

from .exceptions import SpreadError
from .types import AttentionCase, SpreadResult

logger = logging.getLogger(__name__)


def _as_matrix(case: AttentionCase, transpose: bool) -> np.ndarray:
    matrix = np.asarray(case.matrix, dtype=float)
    if matrix.ndim != 2 or matrix.size == 0:
        raise SpreadError(f"[{case.word_id}] 注意力矩阵必须是非空二维矩阵")
    if transpose:
        matrix = matrix.T
    return matrix


def mask_matrix(shape: tuple[int, int], k: int, span: tuple[int, int]) -> np.ndarray:
    """构造与 A 同形的掩码矩阵 M"""
    mask = np.ones(shape, dtype=float)
    m, n = span
    mask[:k, m:n + 1] = 0.0
    return mask


def spread(case: AttentionCase, transpose: bool = False) -> float:
    """
    单个词出现的注意力扩散 S_w

    Args:
        case: 注意力矩阵及目标区域
        transpose: 为True时先转置 A（行为编码端、列为解码端的输入）

    Returns:
        [0, 1] 内的 S_w

    Raises:
        SpreadError: ΣA = 0、存在负值、k 或区间越界

    Examples:
        >>> spread(AttentionCase(((1, 1), (1, 1)), 1, (0, 0), "w"))
        0.75
    """
    matrix = _as_matrix(case, transpose)
    rows, cols = matrix.shape
    k = case.target_pron_len
    m, n = case.target_span

    if not 0 < k <= rows:
        raise SpreadError(f"[{case.word_id}] 发音长度 k={k} 越界（行数 {rows}）")
    if not 0 <= m <= n < cols:
        raise SpreadError(f"[{case.word_id}] 目标区间 [{m}, {n}] 越界（列数 {cols}）")
    if np.any(matrix < 0) or not np.all(np.isfinite(matrix)):
        raise SpreadError(f"[{case.word_id}] 注意力矩阵存在负值或非有限值")

    total = matrix.sum()
    if total <= 0:
        raise SpreadError(f"[{case.word_id}] 注意力总和为0")

    outside = float((mask_matrix(matrix.shape, k, (m, n)) * matrix).sum())
    return min(1.0, max(0.0, outside / total))


def spread_corpus(cases: Sequence[AttentionCase], transpose: bool = False) -> SpreadResult:
    """
    语料级注意力扩散 S_token

    Raises:
        SpreadError: 输入为空或某个词出现无法计算
    """
    if not cases:
        raise SpreadError("注意力样本为空，S_token无定义")

    per_word = [(case.word_id, spread(case, transpose=transpose)) for case in cases]
    s_token = math.fsum(s for _, s in per_word) / len(per_word)
    logger.info(f"✅ 注意力扩散计算完成: {len(per_word)} 个词出现, S_token={s_token:.4f}")
    return SpreadResult(per_word=per_word, s_token=s_token)
