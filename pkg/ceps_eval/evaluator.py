"""
评测主控制器模块

协调加载、切片、编辑距离、指标计算与统计分析各组件
"""

import logging
from dataclasses import replace
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import pandas as pd

from . import corpstats, errorsim, logospread, metrics
from .converter import FormatConverter
from .exceptions import CepsEvalError, SaturationError, ValidationError
from .loader import FileLoader
from .types import (
    AttentionCase,
    CorrMatrix,
    CurvePoint,
    EditSummary,
    EvalReport,
    GroupScore,
    InventoryStats,
    ScoreOptions,
    SegmentationScheme,
    SimConfig,
    SimOutcome,
    SpreadResult,
    TwoEncodingReport,
    Utterance,
    UtteranceScore,
)
from .utils.text_utils import strip_punctuation
from .utils.validation import (
    SUPPORTED_NORMS,
    SUPPORTED_SLICES,
    validate_choice,
    validate_score_options,
)

logger = logging.getLogger(__name__)

ManifestInput = Union[str, Path, Sequence[Utterance]]

UNLABELED_GROUP = "unknown"


class CepsEvaluator:
    """
    评测主控制器

    职责：
    1. 统一评测接口（Python API、命令行、MCP 共用）
    2. 协调各组件工作
    3. 收集可恢复异常为报告中的警告
    """

    def __init__(self):
        """初始化评测器"""
        self.loader = FileLoader()
        self.converter = FormatConverter()
        logger.debug("CepsEvaluator 初始化完成")

    def _utterances(self, manifest: ManifestInput) -> list[Utterance]:
        if isinstance(manifest, (str, Path)):
            return self.loader.read_manifest(manifest)
        return list(manifest)

    def _preprocess(self, utts: list[Utterance], options: ScoreOptions) -> list[Utterance]:
        if not options.strip_punct:
            return utts
        logger.debug("按Unicode标点类别去除标点")
        return [
            replace(u, reference=strip_punctuation(u.reference), hypothesis=strip_punctuation(u.hypothesis))
            for u in utts
        ]

    def _utterance_score(
        self,
        utt: Utterance,
        summary: EditSummary,
        options: ScoreOptions,
        warnings: list[str],
    ) -> UtteranceScore:
        if summary.ref_len == 0:
            warnings.append(f"语句 {utt.id}: 参考为空，无逐条估计")
            return UtteranceScore(utt.id, summary, None)

        tau_slices = summary.hyp_len if options.tau_source == "hypothesis" else None
        if tau_slices == 0:
            warnings.append(f"语句 {utt.id}: 识别结果为空，无法以识别结果计算 τ")
            return UtteranceScore(utt.id, summary, None)

        try:
            estimate = metrics.estimate_from_counts(
                summary.ref_len,
                utt.duration_s,
                summary.distance,
                tau_slices=tau_slices,
                clamp=options.clamp,
                ids=[utt.id],
            )
        except SaturationError as e:
            warnings.append(f"语句 {utt.id}: {e}")
            logger.warning(f"语句 {utt.id} 饱和，跳过逐条估计")
            return UtteranceScore(utt.id, summary, None)

        if estimate.clamped:
            warnings.append(f"语句 {utt.id}: p ≥ 1，已截断到 {metrics.CLAMP_CEILING}")
        return UtteranceScore(utt.id, summary, estimate)

    def _groups(
        self,
        utts: list[Utterance],
        summaries: list[EditSummary],
        options: ScoreOptions,
        warnings: list[str],
    ) -> list[GroupScore]:
        buckets: dict[str, list[int]] = {}
        for index, utt in enumerate(utts):
            key = getattr(utt, options.group_by) or UNLABELED_GROUP
            buckets.setdefault(key, []).append(index)

        groups = []
        for key, indices in buckets.items():
            group_utts = [utts[i] for i in indices]
            group_summaries = [summaries[i] for i in indices]
            try:
                pooled = metrics.score_pooled(
                    group_utts,
                    options.scheme,
                    clamp=options.clamp,
                    tau_source=options.tau_source,
                    summaries=group_summaries,
                )
                error_rate = metrics.corpus_error_rate(group_summaries)
            except CepsEvalError as e:
                warnings.append(f"分组 {key}: {e}")
                continue
            groups.append(GroupScore(key=key, utterances=len(indices), cer=error_rate, pooled=pooled))
        return groups

    def score(self, manifest: ManifestInput, options: Optional[ScoreOptions] = None) -> EvalReport:
        """
        评分主方法

        Args:
            manifest: 清单路径或语句列表
            options: 评分选项（默认 grapheme/nfc、pooled、不截断、τ取自参考）

        Returns:
            EvalReport

        Raises:
            ValidationError: 选项非法、清单为空、时长非正（指明语句）
            SaturationError: 语料级 p ≥ 1 且未开启截断
            FileLoadError / ManifestError: 清单读取失败

        Examples:
            >>> evaluator = CepsEvaluator()
            >>> report = evaluator.score("manifest.jsonl", ScoreOptions(aggregation="both"))
            >>> print(report.cer, report.pooled.lambda_, report.macro)
        """
        options = validate_score_options(options or ScoreOptions())
        scheme = options.scheme
        warnings: list[str] = []

        logger.info("步骤 1/4: 加载清单...")
        utts = self._preprocess(self._utterances(manifest), options)
        if not utts:
            raise ValidationError("清单为空，无法评分")
        metrics.check_durations(utts)

        logger.info(f"步骤 2/4: 计算编辑距离（切片方案 {scheme.tag}）...")
        summaries = metrics.summarize(utts, scheme, options.workers)

        logger.info("步骤 3/4: 计算 CER / CEPS...")
        per_utterance = [self._utterance_score(u, s, options, warnings) for u, s in zip(utts, summaries)]

        pooled = metrics.score_pooled(
            utts,
            scheme,
            clamp=options.clamp,
            tau_source=options.tau_source,
            summaries=summaries,
        )
        if pooled.clamped:
            warnings.append(f"语料级 p ≥ 1，已截断到 {metrics.CLAMP_CEILING}")

        macro: Optional[float] = None
        try:
            macro = metrics.score_macro(
                utts,
                scheme,
                clamp=options.clamp,
                tau_source=options.tau_source,
                summaries=summaries,
            )
        except CepsEvalError as e:
            if options.aggregation in ("macro", "both"):
                raise
            warnings.append(f"逐条平均不可用: {e}")

        error_rate = metrics.corpus_error_rate(summaries)
        if error_rate > 1:
            warnings.append(f"CER超过100%: {error_rate:.6f}（插入错误占主导）")

        groups: list = []
        if options.group_by != "none":
            logger.info(f"步骤 4/4: 按 {options.group_by} 分组...")
            groups = self._groups(utts, summaries, options, warnings)
        else:
            logger.info("步骤 4/4: 跳过（未分组）")

        report = EvalReport(
            per_utterance=per_utterance,
            pooled=pooled,
            macro=macro,
            cer=error_rate,
            segmentation=scheme.tag,
            aggregation=options.aggregation,
            tau_source=options.tau_source,
            groups=groups,
            warnings=warnings,
        )
        logger.info(
            f"✅ 评分完成！{len(utts)} 条语句, CER={error_rate:.4f}, "
            f"CEPS={pooled.lambda_:.4f}" + (f", macro={macro:.4f}" if macro is not None else "")
        )
        return report

    def stats(
        self,
        source: Union[ManifestInput, Iterable[str]],
        scheme: Optional[SegmentationScheme] = None,
        field: str = "reference",
        keep_whitespace: bool = False,
    ) -> InventoryStats:
        """
        字素清单统计

        Args:
            source: 清单路径、语句列表或文本列表
            scheme: 切片方案
            field: 统计清单中的 reference 或 hypothesis
            keep_whitespace: 是否计入空白切片
        """
        validate_choice("--field", field, ("reference", "hypothesis"))
        scheme = scheme or SegmentationScheme()
        validate_choice("--slices", scheme.kind, SUPPORTED_SLICES)
        validate_choice("--norm", scheme.normalization, SUPPORTED_NORMS)
        if isinstance(source, (str, Path)):
            source = self.loader.read_manifest(source)
        texts = [getattr(item, field) if isinstance(item, Utterance) else item for item in source]

        result = corpstats.inventory(texts, scheme, keep_whitespace=keep_whitespace)
        logger.info(f"✅ 字素清单: |C|={result.inventory_size}, H(C)={result.entropy_bits:.4f} bits")
        return result

    def corr(
        self,
        table: Union[str, Path, pd.DataFrame, dict],
        columns: Optional[Sequence[str]] = None,
        alpha: float = corpstats.DEFAULT_ALPHA,
    ) -> CorrMatrix:
        """相关矩阵（table 可以是 CSV/TSV/xlsx 路径）"""
        if isinstance(table, (str, Path)):
            table = self.loader.read_table(table)
        return corpstats.corr_matrix(table, columns=columns, alpha=alpha)

    def spread(
        self,
        cases: Union[str, Path, Sequence[AttentionCase]],
        transpose: bool = False,
    ) -> SpreadResult:
        """注意力扩散（cases 可以是 JSONL 路径）"""
        if isinstance(cases, (str, Path)):
            cases = self.loader.read_cases(cases)
        return logospread.spread_corpus(cases, transpose=transpose)

    def simulate(self, config: Optional[SimConfig] = None) -> SimOutcome:
        """泊松点过程模拟"""
        return errorsim.simulate_process(config or SimConfig())

    def two_encoding(self, **params) -> TwoEncodingReport:
        """音节/字母二编码实验，参数同 errorsim.two_encoding_experiment"""
        return errorsim.two_encoding_experiment(**params)

    def curve(self, points: int, p_max: float = 0.9, tau: float = 1.0) -> list[CurvePoint]:
        """CEPS 曲线数据"""
        return errorsim.curve_data(points, p_max=p_max, tau=tau)
