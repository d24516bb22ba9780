"""
错误过程模拟模块

用齐次泊松点过程验证 CEPS 的校准性：

- simulate_process: 按给定 λ 在时间轴上撒点，切成 τ 秒的切片，
  比较 CEPS 与未校准的 p/τ
- two_encoding_experiment: 同一批韩文语料分别按音节与字母(Jamo)计分
- word_char_experiment: 同一批语料分别按字符与词计分
- curve_data: τ=1 时 CEPS 与 p 的对照曲线

随机数生成器固定为 numpy 的 PCG64（64位，可移植），
每个 τ 使用 SeedSequence(seed).spawn 派生的独立子流，相同种子结果逐位一致。
"""

import logging
import math
from typing import Sequence

import numpy as np
from numpy.random import PCG64, Generator, SeedSequence

from .exceptions import DomainError
from .metrics import ceps, pooled_estimate, summarize
from .types import (
    CorruptionMode,
    CurvePoint,
    SegmentationScheme,
    SimConfig,
    SimOutcome,
    TauOutcome,
    TwoEncodingReport,
    Utterance,
    ViewMetrics,
)
from .utils.hangul import (
    LEAD_COUNT,
    TAIL_COUNT,
    VOWEL_COUNT,
    hangul_decompose,
    join_syllable,
    split_syllable,
)

logger = logging.getLogger(__name__)

SYLLABLE_COUNT = LEAD_COUNT * VOWEL_COUNT * TAIL_COUNT

# 平均 p 达到该值即视为进入饱和区
BREAKDOWN_P = 0.9

CODEPOINT_VIEW = SegmentationScheme(kind="codepoint", normalization="none")
LETTER_VIEW = SegmentationScheme(kind="codepoint", normalization="none", strip_whitespace=True)
WORD_VIEW = SegmentationScheme(kind="word", normalization="none")

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def _check_seed(seed: int) -> None:
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise DomainError(f"seed 必须是非负整数: {seed!r}")


def make_rng(seed: int) -> Generator:
    """PCG64 生成器"""
    _check_seed(seed)
    return Generator(PCG64(seed))


def validate_config(cfg: SimConfig) -> None:
    """
    Raises:
        DomainError: λ < 0、时长 ≤ 0、τ ≤ 0、τ 超过总时长、trials < 1 或 seed 为负
    """
    _check_seed(cfg.seed)
    if cfg.lambda_true < 0:
        raise DomainError(f"lambda_true 必须 ≥ 0: {cfg.lambda_true}")
    if cfg.duration_s <= 0:
        raise DomainError(f"duration_s 必须 > 0: {cfg.duration_s}")
    if not cfg.tau_list:
        raise DomainError("tau_list 不能为空")
    for tau in cfg.tau_list:
        if tau <= 0:
            raise DomainError(f"τ 必须 > 0: {tau}")
        if tau > cfg.duration_s:
            raise DomainError(f"τ={tau} 超过总时长 {cfg.duration_s}")
    if cfg.trials < 1:
        raise DomainError(f"trials 必须 ≥ 1: {cfg.trials}")


def _slice_count(duration_s: float, tau: float) -> int:
    # 10000/0.1 之类的整除在浮点下可能略小于整数
    return int(math.floor(duration_s / tau + 1e-9))


def _event_times(rng: Generator, rate: float, duration_s: float) -> np.ndarray:
    """泊松计数 + 均匀次序统计量"""
    count = rng.poisson(rate * duration_s)
    return np.sort(rng.uniform(0.0, duration_s, size=count))


def _errored_fraction(times: np.ndarray, tau: float, slices: int) -> float:
    index = np.floor(times / tau).astype(np.int64)
    index = index[index < slices]
    return np.unique(index).size / slices


def _simulate_tau(cfg: SimConfig, tau: float, rng: Generator) -> TauOutcome:
    slices = _slice_count(cfg.duration_s, tau)
    ps = np.empty(cfg.trials)
    for trial in range(cfg.trials):
        times = _event_times(rng, cfg.lambda_true, cfg.duration_s)
        ps[trial] = _errored_fraction(times, tau, slices)

    saturated = int(np.count_nonzero(ps >= 1.0))
    finite = [ceps(tau, float(p)) for p in ps if p < 1.0]
    mean_ceps = math.fsum(finite) / len(finite) if finite else math.nan
    if len(finite) >= 2:
        stderr = float(np.std(finite, ddof=1)) / math.sqrt(len(finite))
    else:
        stderr = 0.0

    mean_p = float(math.fsum(ps) / cfg.trials)
    outcome = TauOutcome(
        tau=tau,
        mean_p=mean_p,
        mean_ceps=mean_ceps,
        mean_raw=mean_p / tau,
        stderr_ceps=stderr,
        saturated_trials=saturated,
        breakdown=saturated > 0 or mean_p >= BREAKDOWN_P,
    )
    if outcome.breakdown:
        logger.warning(f"τ={tau}: p 接近饱和 (mean p={mean_p:.4f}, 饱和试验 {saturated} 次)，CEPS 不再可靠")
    logger.debug(f"τ={tau}: p={mean_p:.4f}, CEPS={mean_ceps:.4f}±{stderr:.4f}, raw={mean_p / tau:.4f}")
    return outcome


def simulate_process(cfg: SimConfig) -> SimOutcome:
    """
    蒙特卡洛模拟

    每次试验: K ~ Poisson(λ·duration)，事件时刻取均匀次序统计量；
    ⌊duration/τ⌋ 个切片中至少含一个事件的记为出错；
    由出错比例 p 计算 CEPS 与 p/τ。

    Args:
        cfg: 模拟配置

    Returns:
        SimOutcome（per_tau 与 tau_list 同序）

    Raises:
        DomainError: 配置不合法
    """
    validate_config(cfg)
    logger.info(
        f"开始模拟: λ={cfg.lambda_true}, 时长={cfg.duration_s}s, "
        f"τ={list(cfg.tau_list)}, trials={cfg.trials}, seed={cfg.seed}"
    )

    children = SeedSequence(cfg.seed).spawn(len(cfg.tau_list))
    per_tau = [
        _simulate_tau(cfg, tau, Generator(PCG64(child)))
        for tau, child in zip(cfg.tau_list, children)
    ]

    logger.info("✅ 模拟完成")
    return SimOutcome(per_tau=per_tau, lambda_true=cfg.lambda_true, config=cfg)


def _perturb_neighbor(rng: Generator, syllable: str, fraction: float) -> str:
    """只改动事件时刻所落在的那个字母（初声/中声/终声）"""
    lead, vowel, tail = split_syllable(syllable)
    parts = 3 if tail else 2
    component = min(int(fraction * parts), parts - 1)
    if component == 0:
        lead = (lead + int(rng.integers(1, LEAD_COUNT))) % LEAD_COUNT
    elif component == 1:
        vowel = (vowel + int(rng.integers(1, VOWEL_COUNT))) % VOWEL_COUNT
    else:
        # 终声可以变为"无终声"
        tail = (tail + int(rng.integers(1, TAIL_COUNT))) % TAIL_COUNT
    return join_syllable(lead, vowel, tail)


def _perturb_random(rng: Generator, syllable: str) -> str:
    """替换为均匀随机的另一个音节"""
    index = ord(syllable) - 0xAC00
    index = (index + int(rng.integers(1, SYLLABLE_COUNT))) % SYLLABLE_COUNT
    return chr(0xAC00 + index)


def _view_metrics(view: str, utts: Sequence[Utterance], scheme: SegmentationScheme) -> ViewMetrics:
    summaries = summarize(utts, scheme)
    estimate = pooled_estimate((s.ref_len, u.duration_s, s.distance) for u, s in zip(utts, summaries))
    return ViewMetrics(
        view=view,
        cer=estimate.p,
        ceps=estimate.lambda_,
        n=estimate.n,
        tau=estimate.tau,
        errors=estimate.total_errors,
    )


def two_encoding_experiment(
    seed: int = 0,
    syllables: int = 10_000,
    utterance_syllables: int = 20,
    seconds_per_syllable: float = 0.2,
    corruption_rate: float = 0.1,
    corruption: CorruptionMode = "neighbor",
) -> TwoEncodingReport:
    """
    音节/字母两种编码的对比实验

    随机生成全音节韩文语料，每条语句时长与音节数成正比；
    以 corruption_rate（每音节事件数）的泊松点过程在时间轴上制造错误，
    然后在音节码位视图与字母码位视图下分别计算 CER 和 CEPS。

    Args:
        seed: 随机种子
        syllables: 音节总数
        utterance_syllables: 每条语句的音节数
        seconds_per_syllable: 每个音节的时长
        corruption_rate: 每音节的平均错误事件数
        corruption: neighbor（只改动事件所在的字母）/ random（替换为随机音节）

    Returns:
        TwoEncodingReport
    """
    if syllables < 1 or utterance_syllables < 1:
        raise DomainError("音节数必须 ≥ 1")
    if seconds_per_syllable <= 0:
        raise DomainError(f"seconds_per_syllable 必须 > 0: {seconds_per_syllable}")
    if corruption_rate < 0:
        raise DomainError(f"corruption_rate 必须 ≥ 0: {corruption_rate}")
    if corruption not in ("neighbor", "random"):
        raise DomainError(f"不支持的破坏方式: {corruption}")

    rng = make_rng(seed)
    rate_per_second = corruption_rate / seconds_per_syllable
    composed: list[Utterance] = []
    jamo: list[Utterance] = []
    events = 0

    for start in range(0, syllables, utterance_syllables):
        size = min(utterance_syllables, syllables - start)
        indices = rng.integers(0, SYLLABLE_COUNT, size=size)
        reference = [chr(0xAC00 + int(i)) for i in indices]
        hypothesis = list(reference)
        duration = size * seconds_per_syllable

        times = _event_times(rng, rate_per_second, duration)
        events += len(times)
        for t in times:
            position = min(int(t / seconds_per_syllable), size - 1)
            fraction = t / seconds_per_syllable - position
            if corruption == "neighbor":
                hypothesis[position] = _perturb_neighbor(rng, hypothesis[position], fraction)
            else:
                hypothesis[position] = _perturb_random(rng, hypothesis[position])

        utt_id = f"ko-{start // utterance_syllables:05d}"
        ref_text, hyp_text = "".join(reference), "".join(hypothesis)
        composed.append(Utterance(utt_id, ref_text, hyp_text, duration, language="ko", script="syllable"))
        jamo.append(Utterance(
            utt_id, hangul_decompose(ref_text), hangul_decompose(hyp_text), duration,
            language="ko", script="jamo",
        ))

    report = TwoEncodingReport(
        composed=_view_metrics("composed", composed, CODEPOINT_VIEW),
        jamo=_view_metrics("jamo", jamo, CODEPOINT_VIEW),
        events=events,
        syllables=syllables,
        corruption=corruption,
    )
    logger.info(
        f"✅ 二编码实验完成: CER {report.composed.cer:.4f} / {report.jamo.cer:.4f}, "
        f"CEPS {report.composed.ceps:.4f} / {report.jamo.ceps:.4f}"
    )
    return report


def _render_words(chars: list[str], word_length: int) -> str:
    return " ".join("".join(chars[k:k + word_length]) for k in range(0, len(chars), word_length))


def word_char_experiment(
    seed: int = 0,
    words: int = 5_000,
    word_length: int = 4,
    seconds_per_char: float = 0.08,
    rate: float = 1.0,
    words_per_utterance: int = 10,
) -> dict[str, ViewMetrics]:
    """
    字符/词两种切片的对比实验

    定长随机词组成语句，事件按每秒 rate 的泊松点过程落在字符上并把该字符换成另一个字母。
    字符视图忽略空格，词视图按空白切分；两者的 CEPS 都应接近 rate。

    Returns:
        {"char": ViewMetrics, "word": ViewMetrics}
    """
    if words < 1 or word_length < 1 or words_per_utterance < 1:
        raise DomainError("词数与词长必须 ≥ 1")
    if seconds_per_char <= 0 or rate < 0:
        raise DomainError("seconds_per_char 必须 > 0 且 rate ≥ 0")

    rng = make_rng(seed)
    utts: list[Utterance] = []
    for start in range(0, words, words_per_utterance):
        count = min(words_per_utterance, words - start)
        letters = rng.integers(0, len(_LETTERS), size=count * word_length)
        reference = [_LETTERS[int(i)] for i in letters]
        hypothesis = list(reference)
        duration = len(reference) * seconds_per_char

        for t in _event_times(rng, rate, duration):
            position = min(int(t / seconds_per_char), len(reference) - 1)
            current = _LETTERS.index(hypothesis[position])
            hypothesis[position] = _LETTERS[(current + int(rng.integers(1, len(_LETTERS)))) % len(_LETTERS)]

        utts.append(Utterance(
            f"w-{start // words_per_utterance:05d}",
            _render_words(reference, word_length),
            _render_words(hypothesis, word_length),
            duration,
        ))

    return {
        "char": _view_metrics("char", utts, LETTER_VIEW),
        "word": _view_metrics("word", utts, WORD_VIEW),
    }


def curve_data(points: int, p_max: float = 0.9, tau: float = 1.0) -> list[CurvePoint]:
    """
    CEPS 与未校准错误率的对照曲线

    p 在 [0, p_max] 上等距取 points 个点（不含1）。

    Args:
        points: 采样点数（≥ 2）
        p_max: p 的上限（< 1）
        tau: 每切片秒数

    Examples:
        >>> [round(c.ceps, 4) for c in curve_data(3)]
        [0.0, 0.5978, 2.3026]
    """
    if points < 2:
        raise DomainError(f"points 必须 ≥ 2: {points}")
    if not 0 < p_max < 1:
        raise DomainError(f"p_max 必须在 (0, 1) 内: {p_max}")

    grid = np.linspace(0.0, p_max, points)
    return [CurvePoint(p=float(p), ceps=ceps(tau, float(p)), raw=float(p) / tau) for p in grid]
