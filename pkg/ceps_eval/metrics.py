"""
评测指标模块

实现 CER/WER、泊松切片错误模型、CEPS估计量及其对数似然，以及两种聚合方式：

- pooled: 先对 T(参考切片数)、L(时长)、E(错误数) 求和，再 λ = -(T/L)·ln(1 - E/T)
- macro: 逐条计算 λ_i = -(n_i/l_i)·ln(1 - e_i/n_i) 后取算术平均

CEPS 全部使用自然对数。
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from scipy import stats
from scipy.optimize import minimize_scalar

from .editdist import levenshtein
from .exceptions import DomainError, SaturationError, ValidationError
from .segmenter import segment
from .types import CepsEstimate, EditSummary, SegmentationScheme, TauSource, Utterance

logger = logging.getLogger(__name__)

# --clamp 时 p 的上限
CLAMP_CEILING = 1.0 - 1e-6

WORD_SCHEME = SegmentationScheme(kind="word", normalization="nfc")


def poisson_pmf(k: int, lambda_: float, tau: float) -> float:
    """
    一个切片恰有 k 个错误的概率 (λτ)^k e^{-λτ} / k!

    Raises:
        DomainError: k < 0、λ < 0 或 τ ≤ 0
    """
    if k < 0 or int(k) != k:
        raise DomainError(f"k 必须是非负整数: {k}")
    if lambda_ < 0:
        raise DomainError(f"λ 必须 ≥ 0: {lambda_}")
    if tau <= 0:
        raise DomainError(f"τ 必须 > 0: {tau}")
    return float(stats.poisson.pmf(int(k), lambda_ * tau))


def log_likelihood(
    lambda_: Union[float, np.ndarray],
    tau: float,
    p: float,
    n: float,
) -> Union[float, np.ndarray]:
    """
    对数似然 L(λ) = pn·ln(1 - e^{-λτ}) - (1-p)·n·λτ

    lambda_ 可以是数组（用于网格搜索）。

    Raises:
        DomainError: 需满足 0 < p < 1、λ > 0、τ > 0、n > 0
    """
    if not 0 < p < 1:
        raise DomainError(f"p 必须在 (0, 1) 内: {p}")
    if tau <= 0:
        raise DomainError(f"τ 必须 > 0: {tau}")
    if n <= 0:
        raise DomainError(f"n 必须 > 0: {n}")
    lam = np.asarray(lambda_, dtype=float)
    if np.any(lam <= 0):
        raise DomainError("λ 必须 > 0")

    x = lam * tau
    value = p * n * np.log(-np.expm1(-x)) - (1.0 - p) * n * x
    if np.ndim(value) == 0:
        return float(value)
    return value


def ceps(tau: float, p: float) -> float:
    """
    校准每秒错误数 λ = (1/τ)·ln(1/(1-p))

    Args:
        tau: 每切片秒数
        p: 归一化编辑距离

    Raises:
        DomainError: τ ≤ 0 或 p < 0
        SaturationError: p ≥ 1

    Examples:
        >>> round(ceps(0.1469, 0.3343), 4)
        2.7699
    """
    if tau <= 0:
        raise DomainError(f"τ 必须 > 0: {tau}")
    if p < 0:
        raise DomainError(f"p 必须 ≥ 0: {p}")
    if p >= 1:
        raise SaturationError(p)
    if p == 0:
        return 0.0
    return -math.log1p(-p) / tau


def raw_rate(tau: float, p: float) -> float:
    """未校准的每秒错误数 p/τ"""
    if tau <= 0:
        raise DomainError(f"τ 必须 > 0: {tau}")
    return p / tau


def mle_lambda(tau: float, p: float, n: float) -> float:
    """
    数值最大化对数似然求 λ（用于与闭式解互相校验）

    Raises:
        DomainError: 需满足 0 < p < 1
    """
    closed = ceps(tau, p)
    if p == 0:
        return 0.0
    upper = 10.0 * closed + 1.0
    result = minimize_scalar(
        lambda lam: -log_likelihood(lam, tau, p, n),
        bounds=(1e-12, upper),
        method="bounded",
        options={"xatol": 1e-10},
    )
    return float(result.x)


def cer(summary: EditSummary) -> float:
    """
    CER = (S + D + I) / N

    插入占主导时可能超过1，原值返回并记录警告。

    Raises:
        DomainError: 参考长度为0
    """
    if summary.ref_len == 0:
        raise DomainError("参考切片数为0，CER无定义")
    value = summary.distance / summary.ref_len
    if value > 1:
        logger.warning(f"CER超过100%: {value:.4f}（插入错误占主导）")
    return value


def estimate_from_counts(
    n: int,
    duration_s: float,
    errors: int,
    *,
    tau_slices: Optional[int] = None,
    clamp: bool = False,
    ids: Sequence[str] = (),
) -> CepsEstimate:
    """
    由 (切片数, 时长, 错误数) 计算 CepsEstimate

    Args:
        n: 参考切片数（p 的分母）
        duration_s: 时长
        errors: 编辑距离
        tau_slices: τ 的切片数分母（默认与 n 相同）
        clamp: p ≥ 1 时截断到 CLAMP_CEILING
        ids: 饱和时在异常中列出的语句ID

    Raises:
        ValidationError: n ≤ 0 或时长 ≤ 0
        SaturationError: p ≥ 1 且未开启截断
    """
    if n <= 0:
        raise ValidationError(f"参考切片数必须 > 0: {n}")
    if duration_s <= 0:
        raise ValidationError(f"时长必须 > 0: {duration_s}")
    slices_for_tau = n if tau_slices is None else tau_slices
    if slices_for_tau <= 0:
        raise ValidationError(f"τ 的切片数必须 > 0: {slices_for_tau}")

    p = errors / n
    clamped = False
    if p >= 1:
        if not clamp:
            raise SaturationError(p, ids)
        p = CLAMP_CEILING
        clamped = True

    tau = duration_s / slices_for_tau
    return CepsEstimate(
        lambda_=ceps(tau, p),
        tau=tau,
        p=p,
        n=n,
        total_duration_s=duration_s,
        total_errors=errors,
        raw_rate=raw_rate(tau, p),
        clamped=clamped,
    )


def pooled_estimate(
    triples: Iterable[tuple[int, float, int]],
    *,
    tau_slices: Optional[int] = None,
    clamp: bool = False,
    ids: Sequence[str] = (),
) -> CepsEstimate:
    """
    按"先求和"方式由 (n_i, l_i, d_i) 序列计算估计值

    时长用 math.fsum 求和，结果与切分方式及顺序无关。
    """
    triples = list(triples)
    total_slices = sum(t[0] for t in triples)
    total_duration = math.fsum(t[1] for t in triples)
    total_errors = sum(t[2] for t in triples)
    if total_slices <= 0:
        raise ValidationError("参考切片总数为0，无法计算CEPS")
    return estimate_from_counts(
        total_slices,
        total_duration,
        total_errors,
        tau_slices=tau_slices,
        clamp=clamp,
        ids=ids,
    )


def _edit_summary(utt: Utterance, scheme: SegmentationScheme) -> EditSummary:
    return levenshtein(segment(utt.reference, scheme), segment(utt.hypothesis, scheme))


def summarize(
    utts: Sequence[Utterance],
    scheme: SegmentationScheme,
    workers: int = 1,
) -> list[EditSummary]:
    """
    逐条计算编辑距离汇总，结果顺序与输入一致

    Args:
        utts: 语句列表
        scheme: 切片方案
        workers: 并发数（>1 时使用线程池）
    """
    if workers <= 1 or len(utts) < 2:
        return [_edit_summary(u, scheme) for u in utts]

    logger.debug(f"并发计算编辑距离: {len(utts)} 条，并发数 {workers}")
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(lambda u: _edit_summary(u, scheme), utts))


def check_durations(utts: Sequence[Utterance]) -> None:
    """参与CEPS计算的语句时长必须 > 0"""
    for utt in utts:
        if not utt.duration_s > 0:
            raise ValidationError(f"语句 {utt.id} 的时长必须 > 0: {utt.duration_s}")


def _tau_slices(summaries: Sequence[EditSummary], tau_source: TauSource) -> Optional[int]:
    if tau_source == "hypothesis":
        return sum(s.hyp_len for s in summaries)
    return None


def score_pooled(
    utts: Sequence[Utterance],
    scheme: SegmentationScheme,
    *,
    clamp: bool = False,
    tau_source: TauSource = "reference",
    summaries: Optional[Sequence[EditSummary]] = None,
    workers: int = 1,
) -> CepsEstimate:
    """
    默认聚合：T = Σn_i, L = Σl_i, E = Σd_i；τ = L/T, p = E/T

    Args:
        utts: 语句列表
        scheme: 切片方案
        clamp: p ≥ 1 时截断
        tau_source: τ 分母来源
        summaries: 已计算的编辑距离（省略则现算）
        workers: 并发数

    Raises:
        ValidationError: 时长非正（指明语句）或参考切片总数为0
        SaturationError: E/T ≥ 1 且未开启截断
    """
    if not utts:
        raise ValidationError("清单为空，无法计算CEPS")
    check_durations(utts)
    if summaries is None:
        summaries = summarize(utts, scheme, workers)

    saturated = [u.id for u, s in zip(utts, summaries) if s.distance >= s.ref_len]
    return pooled_estimate(
        ((s.ref_len, u.duration_s, s.distance) for u, s in zip(utts, summaries)),
        tau_slices=_tau_slices(summaries, tau_source),
        clamp=clamp,
        ids=saturated,
    )


def score_macro(
    utts: Sequence[Utterance],
    scheme: SegmentationScheme,
    *,
    clamp: bool = False,
    tau_source: TauSource = "reference",
    summaries: Optional[Sequence[EditSummary]] = None,
    workers: int = 1,
) -> float:
    """
    逐条平均：λ = (1/m)·Σ -(n_i/l_i)·ln(1 - e_i/n_i)

    Raises:
        ValidationError: 某条参考为空或时长非正（指明语句）
        SaturationError: 存在 e_i ≥ n_i 且未开启截断（列出全部语句）
    """
    if not utts:
        raise ValidationError("清单为空，无法计算CEPS")
    check_durations(utts)
    if summaries is None:
        summaries = summarize(utts, scheme, workers)

    empty = [u.id for u, s in zip(utts, summaries) if s.ref_len == 0]
    if empty:
        raise ValidationError(f"逐条平均要求参考非空，空参考: {', '.join(empty)}")

    if not clamp:
        saturated = [(u.id, s.distance / s.ref_len) for u, s in zip(utts, summaries) if s.distance >= s.ref_len]
        if saturated:
            raise SaturationError(max(p for _, p in saturated), [i for i, _ in saturated])

    rates = []
    for utt, summary in zip(utts, summaries):
        estimate = estimate_from_counts(
            summary.ref_len,
            utt.duration_s,
            summary.distance,
            tau_slices=summary.hyp_len if tau_source == "hypothesis" else None,
            clamp=clamp,
            ids=[utt.id],
        )
        rates.append(estimate.lambda_)
    return math.fsum(rates) / len(rates)


def wer_mode(
    utts: Sequence[Utterance],
    aggregation: str = "pooled",
    *,
    clamp: bool = False,
    tau_source: TauSource = "reference",
    workers: int = 1,
) -> Union[CepsEstimate, float]:
    """
    以词为切片的 score_pooled / score_macro

    pooled 结果中的 p 即语料级 WER。
    """
    if aggregation == "macro":
        return score_macro(utts, WORD_SCHEME, clamp=clamp, tau_source=tau_source, workers=workers)
    return score_pooled(utts, WORD_SCHEME, clamp=clamp, tau_source=tau_source, workers=workers)


def corpus_error_rate(summaries: Sequence[EditSummary]) -> float:
    """语料级错误率 ΣD / ΣN（字符切片时即 CER，词切片时即 WER）"""
    total = sum(s.ref_len for s in summaries)
    if total == 0:
        raise DomainError("参考切片总数为0，错误率无定义")
    value = sum(s.distance for s in summaries) / total
    if value > 1:
        logger.warning(f"错误率超过100%: {value:.4f}（插入错误占主导）")
    return value
