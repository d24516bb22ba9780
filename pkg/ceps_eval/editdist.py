"""
编辑距离模块

- levenshtein: 完整DP矩阵 + 回溯，给出 S/D/I 分解（作为基准实现）
- levenshtein_fast: 去除公共前后缀后的位并行算法（Myers/Hyyrö），只计算距离
- align: 最优对齐路径

回溯从矩阵末端开始，等价路径按 匹配 > 替换 > 删除 > 插入 的顺序选择。
"""

import logging
from typing import Sequence

import numpy as np

from .exceptions import SchemeMismatchError
from .types import Alignment, AlignmentStep, EditSummary, SliceSequence

logger = logging.getLogger(__name__)


def _check_schemes(ref: SliceSequence, hyp: SliceSequence) -> None:
    if ref.scheme != hyp.scheme:
        raise SchemeMismatchError(
            f"切片方案不一致: 参考={ref.scheme.tag}, 识别结果={hyp.scheme.tag}"
        )


def _encode(ref: Sequence[str], hyp: Sequence[str]) -> tuple[np.ndarray, np.ndarray]:
    """切片 → 整数编码（相同字符串得到相同编码）"""
    codes: dict[str, int] = {}
    ra = np.fromiter((codes.setdefault(s, len(codes)) for s in ref), dtype=np.int64, count=len(ref))
    hb = np.fromiter((codes.setdefault(s, len(codes)) for s in hyp), dtype=np.int64, count=len(hyp))
    return ra, hb


def distance_matrix(ref: Sequence[str], hyp: Sequence[str]) -> np.ndarray:
    """
    计算完整的 (m+1)×(n+1) 编辑距离矩阵

    按行向量化：先取 删除/替换 两项的最小值，
    再用 j + cummin(row - j) 一次性解决行内的插入依赖。
    每次调用独立分配矩阵，可安全并发。
    """
    m, n = len(ref), len(hyp)
    matrix = np.empty((m + 1, n + 1), dtype=np.int32)
    cols = np.arange(n + 1, dtype=np.int32)
    matrix[0] = cols
    if m == 0:
        return matrix

    ra, hb = _encode(ref, hyp)
    row = np.empty(n + 1, dtype=np.int32)
    for i in range(1, m + 1):
        prev = matrix[i - 1]
        cost = (hb != ra[i - 1]).astype(np.int32)
        row[0] = i
        np.minimum(prev[1:] + 1, prev[:-1] + cost, out=row[1:])
        matrix[i] = np.minimum.accumulate(row - cols) + cols
    return matrix


def _backtrace(ref: Sequence[str], hyp: Sequence[str], matrix: np.ndarray) -> list[AlignmentStep]:
    steps: list[AlignmentStep] = []
    i, j = len(ref), len(hyp)
    while i > 0 or j > 0:
        here = matrix[i, j]
        if i > 0 and j > 0 and ref[i - 1] == hyp[j - 1] and here == matrix[i - 1, j - 1]:
            steps.append(AlignmentStep("match", i - 1, j - 1, ref[i - 1], hyp[j - 1]))
            i, j = i - 1, j - 1
        elif i > 0 and j > 0 and ref[i - 1] != hyp[j - 1] and here == matrix[i - 1, j - 1] + 1:
            steps.append(AlignmentStep("substitute", i - 1, j - 1, ref[i - 1], hyp[j - 1]))
            i, j = i - 1, j - 1
        elif i > 0 and here == matrix[i - 1, j] + 1:
            steps.append(AlignmentStep("delete", i - 1, None, ref[i - 1], None))
            i -= 1
        else:
            steps.append(AlignmentStep("insert", None, j - 1, None, hyp[j - 1]))
            j -= 1
    steps.reverse()
    return steps


def align(ref: SliceSequence, hyp: SliceSequence) -> Alignment:
    """
    计算最优对齐路径（代价等于编辑距离，等价路径的选择是确定的）

    Raises:
        SchemeMismatchError: 切片方案不一致
    """
    _check_schemes(ref, hyp)
    matrix = distance_matrix(ref.slices, hyp.slices)
    return Alignment(steps=tuple(_backtrace(ref.slices, hyp.slices, matrix)))


def summarize_alignment(alignment: Alignment, ref_len: int, hyp_len: int) -> EditSummary:
    """由对齐路径统计 S/D/I"""
    subs = dels = ins = 0
    for step in alignment.steps:
        if step.op == "substitute":
            subs += 1
        elif step.op == "delete":
            dels += 1
        elif step.op == "insert":
            ins += 1
    return EditSummary(
        substitutions=subs,
        deletions=dels,
        insertions=ins,
        distance=subs + dels + ins,
        ref_len=ref_len,
        hyp_len=hyp_len,
    )


def levenshtein(ref: SliceSequence, hyp: SliceSequence) -> EditSummary:
    """
    单位代价的Levenshtein距离，附带 S/D/I 分解

    Args:
        ref: 参考切片序列
        hyp: 识别结果切片序列

    Returns:
        EditSummary

    Raises:
        SchemeMismatchError: 切片方案不一致

    Examples:
        >>> s = levenshtein(segment("kitten", cp), segment("sitting", cp))
        >>> (s.distance, s.substitutions, s.insertions)
        (3, 2, 1)
    """
    alignment = align(ref, hyp)
    return summarize_alignment(alignment, len(ref), len(hyp))


def replay(ref: Sequence[str], alignment: Alignment) -> list[str]:
    """把对齐路径作用在参考切片上，得到识别结果切片"""
    out: list[str] = []
    for step in alignment.steps:
        if step.op == "match":
            out.append(ref[step.ref_index])
        elif step.op in ("substitute", "insert"):
            out.append(step.hyp_slice)
    return out


def _myers_distance(pattern: Sequence[str], text: Sequence[str]) -> int:
    """
    位并行全局编辑距离（Myers 1999 / Hyyrö 2001）

    以Python整数作为任意长度位向量；第 i 位对应 pattern[i]。
    """
    m = len(pattern)
    if m == 0:
        return len(text)

    peq: dict[str, int] = {}
    for i, piece in enumerate(pattern):
        peq[piece] = peq.get(piece, 0) | (1 << i)

    mask = (1 << m) - 1
    high = 1 << (m - 1)
    pv, mv = mask, 0
    score = m

    for piece in text:
        eq = peq.get(piece, 0)
        xv = eq | mv
        xh = (((eq & pv) + pv) ^ pv) | eq
        ph = mv | ~(xh | pv)
        mh = pv & xh
        if ph & high:
            score += 1
        elif mh & high:
            score -= 1
        # 第0行 D[0][j] = j，水平差值恒为 +1
        ph = (ph << 1) | 1
        mh = mh << 1
        pv = (mh | ~(xv | ph)) & mask
        mv = ph & xv & mask
    return score


def levenshtein_fast(ref: SliceSequence, hyp: SliceSequence, breakdown: bool = False) -> EditSummary:
    """
    快速路径

    相同序列 O(n) 返回；否则去除公共前后缀后以较短一侧为模式做位并行计算。
    breakdown=True 时退回完整DP（等同于 levenshtein）。
    未请求分解时 S/D/I 为按最少插删给出的名义分解
    （D - I = ref_len - hyp_len，其余记为替换），只有 distance 与最优对齐一致。

    Raises:
        SchemeMismatchError: 切片方案不一致
    """
    if breakdown:
        return levenshtein(ref, hyp)

    _check_schemes(ref, hyp)
    a, b = ref.slices, hyp.slices
    ref_len, hyp_len = len(a), len(b)

    if a == b:
        distance = 0
    else:
        start = 0
        limit = min(ref_len, hyp_len)
        while start < limit and a[start] == b[start]:
            start += 1
        end_a, end_b = ref_len, hyp_len
        while end_a > start and end_b > start and a[end_a - 1] == b[end_b - 1]:
            end_a -= 1
            end_b -= 1
        core_a, core_b = a[start:end_a], b[start:end_b]
        if len(core_a) > len(core_b):
            core_a, core_b = core_b, core_a
        distance = _myers_distance(core_a, core_b)

    gap = ref_len - hyp_len
    deletions = max(gap, 0)
    insertions = max(-gap, 0)
    return EditSummary(
        substitutions=distance - deletions - insertions,
        deletions=deletions,
        insertions=insertions,
        distance=distance,
        ref_len=ref_len,
        hyp_len=hyp_len,
    )
