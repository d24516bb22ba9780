"""
文本切片模块

按可插拔的切片方案把文本切成切片序列：
- grapheme: 扩展字素簇（regex 的 \\X）
- codepoint: Unicode码位
- word: 按Unicode空白切分
"""

import logging
import unicodedata

import regex

from .types import SegmentationScheme, SliceSequence
from .utils.text_utils import is_blank_slice

logger = logging.getLogger(__name__)

DEFAULT_SCHEME = SegmentationScheme()

_GRAPHEME_RE = regex.compile(r"\X")

_UNICODE_FORMS = {"nfc": "NFC", "nfd": "NFD"}


def normalize(text: str, form: str) -> str:
    """按方案的规范化形式处理文本（none 原样返回）"""
    if form == "none":
        return text
    return unicodedata.normalize(_UNICODE_FORMS[form], text)


def segment(text: str, scheme: SegmentationScheme = DEFAULT_SCHEME) -> SliceSequence:
    """
    把文本切成切片序列

    Args:
        text: 输入文本
        scheme: 切片方案

    Returns:
        SliceSequence

    Examples:
        >>> len(segment("한글", SegmentationScheme("codepoint", "nfd")))
        6
    """
    text = normalize(text, scheme.normalization)

    if scheme.kind == "word":
        slices = text.split()
    elif scheme.kind == "codepoint":
        slices = list(text)
    else:
        slices = _GRAPHEME_RE.findall(text)

    if scheme.strip_whitespace and scheme.kind != "word":
        slices = [s for s in slices if not is_blank_slice(s)]

    return SliceSequence(slices=tuple(slices), scheme=scheme)


def join_slices(sequence: SliceSequence) -> str:
    """切片拼回文本（word 模式以单个空格作分隔符）"""
    if sequence.scheme.kind == "word":
        return " ".join(sequence.slices)
    return "".join(sequence.slices)
