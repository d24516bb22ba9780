"""
编码检测工具模块

清单要求UTF-8；解码失败时借助chardet给出可能的编码，便于定位问题
"""

import logging
from typing import Optional

logger = logging.getLogger(__name__)


def detect_encoding(content: bytes, default: str = "utf-8") -> str:
    """
    检测字节内容的编码

    Args:
        content: 二进制内容
        default: 默认编码

    Returns:
        检测到的编码
    """
    try:
        import chardet
        result = chardet.detect(content)
        encoding = result.get("encoding")
        confidence = result.get("confidence", 0)

        if encoding and confidence > 0.7:
            logger.debug(f"检测到编码: {encoding} (置信度: {confidence:.2f})")
            return encoding
        logger.debug(f"编码检测置信度过低，使用默认编码: {default}")
        return default

    except ImportError:
        logger.warning(f"chardet未安装，使用默认编码: {default}")
        return default
    except Exception as e:
        logger.warning(f"编码检测失败: {e}，使用默认编码: {default}")
        return default


def decode_utf8(content: bytes) -> tuple[Optional[str], Optional[str]]:
    """
    严格按UTF-8解码

    Returns:
        (文本, None)；失败时返回 (None, 诊断信息)
    """
    try:
        return content.decode("utf-8"), None
    except UnicodeDecodeError as e:
        guess = detect_encoding(content, default="未知")
        return None, f"非UTF-8文本（字节偏移 {e.start}，疑似编码: {guess}）"
