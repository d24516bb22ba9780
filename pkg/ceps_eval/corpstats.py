"""
语料统计模块

- inventory: 字素清单大小 |C| 与一元熵 H(C)（以2为底）
- pearson: Pearson相关系数与双尾 t 检验显著性
- corr_matrix: 多列两两相关矩阵
"""

import logging
import math
from collections import Counter
from itertools import combinations
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np
import pandas as pd
from scipy import special
from scipy import stats as sp_stats

from .exceptions import CorrelationError
from .segmenter import DEFAULT_SCHEME, segment
from .types import CorrMatrix, InventoryStats, SegmentationScheme
from .utils.text_utils import is_blank_slice

logger = logging.getLogger(__name__)

DEFAULT_ALPHA = 0.05


def _stats_from_counts(counts: Counter) -> InventoryStats:
    size = len(counts)
    if size == 0:
        return InventoryStats(inventory_size=0, entropy_bits=0.0, counts={})

    entropy = float(sp_stats.entropy(np.fromiter(counts.values(), dtype=float), base=2))
    # 浮点误差不能越过理论上下界
    entropy = min(max(entropy, 0.0), math.log2(size))
    return InventoryStats(inventory_size=size, entropy_bits=entropy, counts=dict(counts))


def inventory(
    texts: Iterable[str],
    scheme: SegmentationScheme = DEFAULT_SCHEME,
    keep_whitespace: bool = False,
) -> InventoryStats:
    """
    统计字素清单

    Args:
        texts: 文本列表
        scheme: 切片方案
        keep_whitespace: 是否把空白切片计入清单（默认不计入）

    Returns:
        InventoryStats

    Examples:
        >>> inventory(["abab"]).entropy_bits
        1.0
    """
    counts: Counter = Counter()
    for text in texts:
        slices = segment(text, scheme).slices
        if not keep_whitespace:
            slices = [s for s in slices if not is_blank_slice(s)]
        counts.update(slices)

    stats = _stats_from_counts(counts)
    logger.debug(f"字素清单: |C|={stats.inventory_size}, H(C)={stats.entropy_bits:.4f} bits")
    return stats


def merge_counts(shards: Iterable[Mapping[str, int]]) -> InventoryStats:
    """合并并行分片的计数后重新计算统计量"""
    counts: Counter = Counter()
    for shard in shards:
        counts.update(shard)
    return _stats_from_counts(counts)


def pearson(
    x: Sequence[float],
    y: Sequence[float],
    columns: Optional[tuple[str, str]] = None,
) -> tuple[float, float]:
    """
    Pearson相关系数及双尾显著性

    t = r·sqrt((n-2)/(1-r²))，自由度 n-2；
    双尾 p 值用正则化不完全Beta函数计算: p = I_{df/(df+t²)}(df/2, 1/2)

    Args:
        x, y: 等长数值序列（n ≥ 3，均非常数）
        columns: 出错时在消息中标注的列名

    Returns:
        (r, p)

    Raises:
        CorrelationError: 长度不一致、样本少于3个或存在常数列
    """
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if xa.shape != ya.shape:
        raise CorrelationError(f"长度不一致: {len(xa)} vs {len(ya)}", columns)
    n = len(xa)
    if n < 3:
        raise CorrelationError(f"至少需要3个样本，当前 {n} 个", columns)
    if not (np.all(np.isfinite(xa)) and np.all(np.isfinite(ya))):
        raise CorrelationError("存在缺失值或非有限数值", columns)

    xc = xa - xa.mean()
    yc = ya - ya.mean()
    sxx = float(np.dot(xc, xc))
    syy = float(np.dot(yc, yc))
    if sxx == 0 or syy == 0:
        raise CorrelationError("常数列，相关系数无定义", columns)

    r = float(np.dot(xc, yc)) / math.sqrt(sxx * syy)
    r = min(1.0, max(-1.0, r))

    if abs(r) == 1.0:
        return r, 0.0
    df = n - 2
    t_sq = r * r * df / (1.0 - r * r)
    p = float(special.betainc(df / 2.0, 0.5, df / (df + t_sq)))
    return r, p


def _to_frame(table: Union[pd.DataFrame, Mapping[str, Sequence[float]]]) -> pd.DataFrame:
    if isinstance(table, pd.DataFrame):
        return table
    return pd.DataFrame({name: list(values) for name, values in table.items()})


def corr_matrix(
    table: Union[pd.DataFrame, Mapping[str, Sequence[float]]],
    columns: Optional[Sequence[str]] = None,
    alpha: float = DEFAULT_ALPHA,
) -> CorrMatrix:
    """
    计算两两Pearson相关矩阵

    Args:
        table: DataFrame 或 列名 → 数值序列 的映射
        columns: 参与计算的列（默认取全部数值列，按表中顺序）
        alpha: 显著性阈值（仅作标注）

    Returns:
        CorrMatrix

    Raises:
        CorrelationError: 指明出错的列对
    """
    df = _to_frame(table)
    if columns is None:
        columns = list(df.select_dtypes(include="number").columns)
        skipped = [c for c in df.columns if c not in columns]
        if skipped:
            logger.debug(f"跳过非数值列: {', '.join(map(str, skipped))}")
    else:
        missing = [c for c in columns if c not in df.columns]
        if missing:
            raise CorrelationError(f"表中不存在的列: {', '.join(missing)}")
        columns = list(columns)

    if len(columns) < 2:
        raise CorrelationError(f"至少需要2个数值列，当前 {len(columns)} 个")

    data = df[columns].apply(pd.to_numeric, errors="coerce")
    size = len(columns)
    r = [[1.0] * size for _ in range(size)]
    p_values = [[0.0] * size for _ in range(size)]

    for i, j in combinations(range(size), 2):
        pair = (str(columns[i]), str(columns[j]))
        r_ij, p_ij = pearson(data.iloc[:, i].to_numpy(), data.iloc[:, j].to_numpy(), columns=pair)
        r[i][j] = r[j][i] = r_ij
        p_values[i][j] = p_values[j][i] = p_ij

    logger.info(f"✅ 相关矩阵计算完成: {size} 个变量, {len(data)} 行")
    return CorrMatrix(
        variables=[str(c) for c in columns],
        r=r,
        p_values=p_values,
        n=len(data),
        alpha=alpha,
    )


def significance(matrix: CorrMatrix, alpha: Optional[float] = None) -> list[dict]:
    """
    上三角各变量对的显著性标注

    Returns:
        [{"a", "b", "r", "p", "significant"}, ...]，按矩阵行序
    """
    alpha = matrix.alpha if alpha is None else alpha
    rows = []
    for i, j in combinations(range(len(matrix.variables)), 2):
        rows.append({
            "a": matrix.variables[i],
            "b": matrix.variables[j],
            "r": matrix.r[i][j],
            "p": matrix.p_values[i][j],
            "significant": matrix.p_values[i][j] < alpha,
        })
    return rows
