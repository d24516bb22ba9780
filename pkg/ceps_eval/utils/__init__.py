"""
CepsEval工具模块
"""

from .encoding_utils import decode_utf8, detect_encoding
from .hangul import hangul_compose, hangul_decompose
from .text_utils import is_punctuation, strip_punctuation
from .validation import validate_choice, validate_file_path, validate_score_options

__all__ = [
    "decode_utf8",
    "detect_encoding",
    "hangul_compose",
    "hangul_decompose",
    "is_punctuation",
    "strip_punctuation",
    "validate_choice",
    "validate_file_path",
    "validate_score_options",
]
