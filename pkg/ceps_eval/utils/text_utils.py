"""
文本预处理工具模块

提供标点去除、空白判断等工具函数
"""

import re
import unicodedata

# 控制字符（保留 \t \n \r）
ILLEGAL_CHARACTERS_RE = re.compile(r"[\000-\010]|[\013-\014]|[\016-\037]")


def is_punctuation(ch: str) -> bool:
    """是否属于Unicode标点类别（P*）"""
    return unicodedata.category(ch).startswith("P")


def strip_punctuation(text: str) -> str:
    """
    去除Unicode标点类别（Pc/Pd/Ps/Pe/Pi/Pf/Po）的字符

    Args:
        text: 原始文本

    Returns:
        去除标点后的文本
    """
    return "".join(ch for ch in text if not is_punctuation(ch))


def is_blank_slice(piece: str) -> bool:
    """切片是否完全由空白组成"""
    return piece != "" and piece.isspace()


def clean_control_chars(text: str) -> str:
    """将非法控制字符替换为空格"""
    return ILLEGAL_CHARACTERS_RE.sub(" ", text)
