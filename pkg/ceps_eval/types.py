"""
CepsEval类型定义模块

定义了所有核心数据类型和类型别名
"""

import math
from dataclasses import dataclass, field
from typing import Literal, Optional

# 切片类型
SliceKind = Literal["grapheme", "codepoint", "word"]

# 规范化形式（nfc: 规范组合, nfd: 规范分解）
NormForm = Literal["none", "nfc", "nfd"]

# 聚合方式
Aggregation = Literal["pooled", "macro", "both"]

# τ 的切片计数来源
TauSource = Literal["reference", "hypothesis"]

# 分组字段
GroupBy = Literal["none", "language", "script"]

# 对齐操作
EditOp = Literal["match", "substitute", "delete", "insert"]

# 二编码实验的破坏方式
CorruptionMode = Literal["neighbor", "random"]


def _round6(value: Optional[float]) -> Optional[float]:
    """保留6位小数（报告精度）"""
    if value is None or not math.isfinite(value):
        return None
    return round(value, 6)


@dataclass(frozen=True)
class Utterance:
    """一条评测语句"""

    id: str
    """语句ID（清单内唯一）"""

    reference: str
    """参考文本"""

    hypothesis: str
    """识别结果文本"""

    duration_s: float
    """有效语音时长（秒，VAD之后，由上游提供）"""

    language: Optional[str] = None
    """语言标签"""

    script: Optional[str] = None
    """文字系统标签"""

    def to_dict(self) -> dict:
        """转换为字典（清单行格式）"""
        data = {
            "id": self.id,
            "reference": self.reference,
            "hypothesis": self.hypothesis,
            "duration_s": self.duration_s,
        }
        if self.language is not None:
            data["language"] = self.language
        if self.script is not None:
            data["script"] = self.script
        return data


@dataclass(frozen=True)
class SegmentationScheme:
    """切片方案"""

    kind: SliceKind = "grapheme"
    """切片单位: grapheme(扩展字素簇) / codepoint / word"""

    normalization: NormForm = "nfc"
    """Unicode规范化: none / nfc / nfd"""

    strip_whitespace: bool = False
    """字符模式下是否丢弃空白切片"""

    @property
    def tag(self) -> str:
        tag = f"{self.kind}/{self.normalization}"
        if self.strip_whitespace and self.kind != "word":
            tag += "/nows"
        return tag


@dataclass(frozen=True)
class SliceSequence:
    """按切片方案切分后的文本"""

    slices: tuple[str, ...]
    scheme: SegmentationScheme

    def __len__(self) -> int:
        return len(self.slices)


@dataclass(frozen=True)
class EditSummary:
    """编辑距离汇总（S/D/I 取自一条最优对齐）"""

    substitutions: int
    deletions: int
    insertions: int
    distance: int
    ref_len: int
    hyp_len: int

    def to_dict(self) -> dict:
        return {
            "substitutions": self.substitutions,
            "deletions": self.deletions,
            "insertions": self.insertions,
            "distance": self.distance,
            "ref_len": self.ref_len,
            "hyp_len": self.hyp_len,
        }


@dataclass(frozen=True)
class AlignmentStep:
    """对齐中的一步"""

    op: EditOp
    ref_index: Optional[int]
    hyp_index: Optional[int]
    ref_slice: Optional[str] = None
    hyp_slice: Optional[str] = None

    @property
    def cost(self) -> int:
        return 0 if self.op == "match" else 1


@dataclass(frozen=True)
class Alignment:
    """参考到识别结果的对齐路径"""

    steps: tuple[AlignmentStep, ...]

    @property
    def cost(self) -> int:
        return sum(step.cost for step in self.steps)


@dataclass
class ScoreOptions:
    """评分选项配置"""

    slices: SliceKind = "grapheme"
    """切片单位"""

    norm: NormForm = "nfc"
    """Unicode规范化形式"""

    aggregation: Aggregation = "pooled"
    """聚合方式: pooled(先求和) / macro(逐条平均) / both"""

    clamp: bool = False
    """p ≥ 1 时是否截断到 1-1e-6（并在报告中标记）"""

    tau_source: TauSource = "reference"
    """τ 分母使用参考文本还是识别结果的切片数"""

    strip_punct: bool = False
    """是否按Unicode标点类别去除标点"""

    strip_whitespace: bool = False
    """字符模式下是否丢弃空白切片"""

    group_by: GroupBy = "none"
    """按语言/文字系统分组输出"""

    workers: int = 1
    """逐条编辑距离计算的并发数"""

    @property
    def scheme(self) -> SegmentationScheme:
        return SegmentationScheme(
            kind=self.slices,
            normalization=self.norm,
            strip_whitespace=self.strip_whitespace,
        )


@dataclass(frozen=True)
class CepsEstimate:
    """CEPS估计值及其中间量"""

    lambda_: Optional[float]
    """每秒错误数 λ（p ≥ 1 且未截断时为 None）"""

    tau: float
    """每切片秒数 τ"""

    p: float
    """归一化编辑距离 E/T"""

    n: int
    """参考切片数 T"""

    total_duration_s: float
    """总时长 L"""

    total_errors: int
    """总错误数 E"""

    raw_rate: float = 0.0
    """未校准的每秒错误数 p/τ"""

    clamped: bool = False
    """是否经过截断"""

    def to_dict(self) -> dict:
        return {
            "lambda": _round6(self.lambda_),
            "tau": _round6(self.tau),
            "p": _round6(self.p),
            "raw_rate": _round6(self.raw_rate),
            "n": self.n,
            "total_duration_s": _round6(self.total_duration_s),
            "total_errors": self.total_errors,
            "clamped": self.clamped,
        }


@dataclass(frozen=True)
class UtteranceScore:
    """单条语句的评分"""

    id: str
    summary: EditSummary
    estimate: Optional[CepsEstimate]

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "edits": self.summary.to_dict(),
            "estimate": self.estimate.to_dict() if self.estimate else None,
        }


@dataclass(frozen=True)
class GroupScore:
    """按语言或文字系统分组的评分"""

    key: str
    utterances: int
    cer: float
    pooled: CepsEstimate

    def to_dict(self) -> dict:
        return {
            "key": self.key,
            "utterances": self.utterances,
            "cer": _round6(self.cer),
            "pooled": self.pooled.to_dict(),
        }


@dataclass
class EvalReport:
    """评测报告"""

    per_utterance: list[UtteranceScore]
    pooled: CepsEstimate
    macro: Optional[float]
    cer: float
    segmentation: str
    aggregation: Aggregation = "pooled"
    tau_source: TauSource = "reference"
    groups: list[GroupScore] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ceps(self) -> Optional[float]:
        """按聚合方式给出的主指标"""
        if self.aggregation == "macro":
            return self.macro
        return self.pooled.lambda_

    def to_dict(self) -> dict:
        """转换为字典（固定键顺序）"""
        data = {
            "segmentation": self.segmentation,
            "aggregation": self.aggregation,
            "tau_source": self.tau_source,
            "cer": _round6(self.cer),
            "ceps": _round6(self.ceps),
            "pooled": self.pooled.to_dict(),
        }
        if self.macro is not None:
            data["macro"] = _round6(self.macro)
        if self.groups:
            data["groups"] = [g.to_dict() for g in self.groups]
        data["per_utterance"] = [u.to_dict() for u in self.per_utterance]
        data["warnings"] = list(self.warnings)
        return data


@dataclass(frozen=True)
class InventoryStats:
    """字素清单统计"""

    inventory_size: int
    entropy_bits: float
    counts: dict[str, int]

    def to_dict(self) -> dict:
        return {
            "inventory_size": self.inventory_size,
            "entropy_bits": _round6(self.entropy_bits),
            "counts": dict(sorted(self.counts.items(), key=lambda kv: (-kv[1], kv[0]))),
        }


@dataclass(frozen=True)
class CorrMatrix:
    """Pearson相关矩阵"""

    variables: list[str]
    r: list[list[float]]
    p_values: list[list[float]]
    n: int
    alpha: float = 0.05

    def significant(self, a: str, b: str) -> bool:
        i, j = self.variables.index(a), self.variables.index(b)
        return self.p_values[i][j] < self.alpha

    def to_dict(self) -> dict:
        return {
            "variables": list(self.variables),
            "n": self.n,
            "alpha": self.alpha,
            "r": [[_round6(v) for v in row] for row in self.r],
            "p_values": [[_round6(v) for v in row] for row in self.p_values],
            "significant": [
                [i != j and self.p_values[i][j] < self.alpha for j in range(len(self.variables))]
                for i in range(len(self.variables))
            ],
        }


@dataclass(frozen=True)
class AttentionCase:
    """一次词出现的注意力矩阵及目标区域标注"""

    matrix: tuple[tuple[float, ...], ...]
    """注意力矩阵 A（行: 解码端位置, 列: 编码端位置）"""

    target_pron_len: int
    """目标词发音长度 k"""

    target_span: tuple[int, int]
    """目标词列区间 [m, n]（闭区间）"""

    word_id: str


@dataclass(frozen=True)
class SpreadResult:
    """注意力扩散结果"""

    per_word: list[tuple[str, float]]
    s_token: float

    def to_dict(self) -> dict:
        return {
            "s_token": _round6(self.s_token),
            "per_word": [{"word_id": w, "s_w": _round6(s)} for w, s in self.per_word],
        }


@dataclass(frozen=True)
class SimConfig:
    """泊松点过程模拟配置"""

    lambda_true: float = 2.0
    """真实每秒错误数"""

    duration_s: float = 10_000.0
    """总语音时长（秒）"""

    tau_list: tuple[float, ...] = (0.05, 0.1, 0.3)
    """待测试的切片长度"""

    seed: int = 0
    """随机种子（PCG64）"""

    trials: int = 50
    """重复次数"""

    def to_dict(self) -> dict:
        return {
            "lambda_true": self.lambda_true,
            "duration_s": self.duration_s,
            "tau_list": list(self.tau_list),
            "seed": self.seed,
            "trials": self.trials,
        }


@dataclass(frozen=True)
class TauOutcome:
    """单个 τ 下的模拟结果"""

    tau: float
    mean_p: float
    mean_ceps: float
    mean_raw: float
    stderr_ceps: float
    saturated_trials: int = 0
    breakdown: bool = False

    def to_dict(self) -> dict:
        return {
            "tau": self.tau,
            "mean_p": _round6(self.mean_p),
            "mean_ceps": _round6(self.mean_ceps),
            "mean_raw": _round6(self.mean_raw),
            "stderr_ceps": _round6(self.stderr_ceps),
            "saturated_trials": self.saturated_trials,
            "breakdown": self.breakdown,
        }


@dataclass(frozen=True)
class SimOutcome:
    """模拟结果"""

    per_tau: list[TauOutcome]
    lambda_true: float
    config: Optional[SimConfig] = None

    def to_dict(self) -> dict:
        return {
            "lambda_true": self.lambda_true,
            "config": self.config.to_dict() if self.config else None,
            "per_tau": [t.to_dict() for t in self.per_tau],
        }


@dataclass(frozen=True)
class ViewMetrics:
    """同一语料在某一编码视图下的指标"""

    view: str
    cer: float
    ceps: float
    n: int
    tau: float
    errors: int

    def to_dict(self) -> dict:
        return {
            "view": self.view,
            "cer": _round6(self.cer),
            "ceps": _round6(self.ceps),
            "n": self.n,
            "tau": _round6(self.tau),
            "errors": self.errors,
        }


@dataclass(frozen=True)
class TwoEncodingReport:
    """音节/字母两种编码下的对比实验结果"""

    composed: ViewMetrics
    jamo: ViewMetrics
    events: int
    syllables: int
    corruption: CorruptionMode

    @staticmethod
    def _relative_gap(a: float, b: float) -> float:
        if a == 0:
            return 0.0 if b == 0 else math.inf
        return abs(a - b) / a

    @property
    def cer_gap(self) -> float:
        """CER相对差 |CER_音节 - CER_字母| / CER_音节"""
        return self._relative_gap(self.composed.cer, self.jamo.cer)

    @property
    def ceps_gap(self) -> float:
        """CEPS相对差 |CEPS_音节 - CEPS_字母| / CEPS_音节"""
        return self._relative_gap(self.composed.ceps, self.jamo.ceps)

    def to_dict(self) -> dict:
        return {
            "syllables": self.syllables,
            "events": self.events,
            "corruption": self.corruption,
            "composed": self.composed.to_dict(),
            "jamo": self.jamo.to_dict(),
            "cer_gap": _round6(self.cer_gap),
            "ceps_gap": _round6(self.ceps_gap),
        }


@dataclass(frozen=True)
class CurvePoint:
    """CEPS曲线上的一点"""

    p: float
    ceps: float
    raw: float
