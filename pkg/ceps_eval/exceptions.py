"""
CepsEval自定义异常模块

定义了所有自定义异常类型
"""

from typing import Optional, Sequence


class CepsEvalError(Exception):
    """CepsEval基础异常"""
    pass


class ValidationError(CepsEvalError):
    """验证错误异常"""
    pass


class ManifestError(ValidationError):
    """清单记录格式错误异常"""

    def __init__(self, message: str, line_no: Optional[int] = None, utt_id: Optional[str] = None):
        self.line_no = line_no
        self.utt_id = utt_id
        prefix = []
        if line_no is not None:
            prefix.append(f"第{line_no}行")
        if utt_id is not None:
            prefix.append(f"id={utt_id}")
        if prefix:
            message = f"[{', '.join(prefix)}] {message}"
        super().__init__(message)


class DomainError(ValidationError):
    """数值定义域错误异常（τ ≤ 0、k < 0 等）"""
    pass


class SchemeMismatchError(ValidationError):
    """切片方案不一致异常"""
    pass


class CorrelationError(ValidationError):
    """相关系数无定义异常（常数列、样本过少）"""

    def __init__(self, message: str, columns: Optional[tuple[str, str]] = None):
        self.columns = columns
        if columns:
            message = f"{columns[0]} ↔ {columns[1]}: {message}"
        super().__init__(message)


class SpreadError(ValidationError):
    """注意力扩散计算错误异常"""
    pass


class SaturationError(CepsEvalError):
    """饱和异常：归一化编辑距离 p ≥ 1，ln(1/(1-p)) 无定义"""

    def __init__(self, p: float, ids: Sequence[str] = ()):
        self.p = p
        self.ids = list(ids)
        message = f"p={p:.6f} ≥ 1，CEPS无定义（可使用 --clamp）"
        if self.ids:
            message += f"，涉及: {', '.join(self.ids)}"
        super().__init__(message)


class InputOutputError(CepsEvalError):
    """文件读写异常基类"""
    pass


class FileLoadError(InputOutputError):
    """文件加载失败异常"""
    pass


class ReportWriteError(InputOutputError):
    """报告写入失败异常"""
    pass
