"""
CepsEval - 跨语言ASR评测工具包

计算 CER/WER 与校准每秒错误数（CEPS），并提供语料字素统计、
注意力扩散（表意度）与泊松点过程模拟
"""

from .version import __version__
from .evaluator import CepsEvaluator
from .segmenter import segment
from .editdist import align, levenshtein, levenshtein_fast
from .metrics import ceps, cer, log_likelihood, poisson_pmf, score_macro, score_pooled, wer_mode
from .corpstats import corr_matrix, inventory, pearson
from .logospread import spread, spread_corpus
from .errorsim import curve_data, simulate_process, two_encoding_experiment
from .loader import read_manifest
from .converter import write_report
from .utils.hangul import hangul_compose, hangul_decompose
from .types import (
    Utterance,
    SegmentationScheme,
    SliceSequence,
    EditSummary,
    Alignment,
    CepsEstimate,
    EvalReport,
    ScoreOptions,
    InventoryStats,
    CorrMatrix,
    AttentionCase,
    SpreadResult,
    SimConfig,
    SimOutcome,
)
from .exceptions import (
    CepsEvalError,
    ValidationError,
    ManifestError,
    DomainError,
    SchemeMismatchError,
    SaturationError,
    CorrelationError,
    SpreadError,
    InputOutputError,
    FileLoadError,
    ReportWriteError,
)

__all__ = [
    "__version__",
    "CepsEvaluator",
    "segment",
    "align",
    "levenshtein",
    "levenshtein_fast",
    "ceps",
    "cer",
    "log_likelihood",
    "poisson_pmf",
    "score_macro",
    "score_pooled",
    "wer_mode",
    "corr_matrix",
    "inventory",
    "pearson",
    "spread",
    "spread_corpus",
    "curve_data",
    "simulate_process",
    "two_encoding_experiment",
    "read_manifest",
    "write_report",
    "hangul_compose",
    "hangul_decompose",
    "Utterance",
    "SegmentationScheme",
    "SliceSequence",
    "EditSummary",
    "Alignment",
    "CepsEstimate",
    "EvalReport",
    "ScoreOptions",
    "InventoryStats",
    "CorrMatrix",
    "AttentionCase",
    "SpreadResult",
    "SimConfig",
    "SimOutcome",
    "CepsEvalError",
    "ValidationError",
    "ManifestError",
    "DomainError",
    "SchemeMismatchError",
    "SaturationError",
    "CorrelationError",
    "SpreadError",
    "InputOutputError",
    "FileLoadError",
    "ReportWriteError",
]
