"""
韩文音节/字母（Jamo）转换工具

使用Unicode音节算术完成分解与组合：
音节码位 - 0xAC00 = (初声 × 21 + 中声) × 28 + 终声
"""

HANGUL_BASE = 0xAC00
HANGUL_LAST = 0xD7A3
LEAD_COUNT = 19
VOWEL_COUNT = 21
TAIL_COUNT = 28  # 含"无终声"

# 兼容字母区（U+3131..U+3163）
LEADS = (
    "ㄱ", "ㄲ", "ㄴ", "ㄷ", "ㄸ",
    "ㄹ", "ㅁ", "ㅂ", "ㅃ", "ㅅ",
    "ㅆ", "ㅇ", "ㅈ", "ㅉ", "ㅊ",
    "ㅋ", "ㅌ", "ㅍ", "ㅎ",
)
VOWELS = tuple(chr(c) for c in range(0x314F, 0x3164))
TAILS = (
    "",
    "ㄱ", "ㄲ", "ㄳ", "ㄴ", "ㄵ",
    "ㄶ", "ㄷ", "ㄹ", "ㄺ", "ㄻ",
    "ㄼ", "ㄽ", "ㄾ", "ㄿ", "ㅀ",
    "ㅁ", "ㅂ", "ㅄ", "ㅅ", "ㅆ",
    "ㅇ", "ㅈ", "ㅊ", "ㅋ", "ㅌ",
    "ㅍ", "ㅎ",
)

# 组合用字母区（U+1100 / U+1161 / U+11A8）
CONJOINING_LEAD_BASE = 0x1100
CONJOINING_VOWEL_BASE = 0x1161
CONJOINING_TAIL_BASE = 0x11A7

_LEAD_INDEX = {ch: i for i, ch in enumerate(LEADS)}
_VOWEL_INDEX = {ch: i for i, ch in enumerate(VOWELS)}
_TAIL_INDEX = {ch: i for i, ch in enumerate(TAILS) if ch}

for _i in range(LEAD_COUNT):
    _LEAD_INDEX[chr(CONJOINING_LEAD_BASE + _i)] = _i
for _i in range(VOWEL_COUNT):
    _VOWEL_INDEX[chr(CONJOINING_VOWEL_BASE + _i)] = _i
for _i in range(1, TAIL_COUNT):
    _TAIL_INDEX[chr(CONJOINING_TAIL_BASE + _i)] = _i


def is_syllable(ch: str) -> bool:
    """是否为预组合韩文音节"""
    return len(ch) == 1 and HANGUL_BASE <= ord(ch) <= HANGUL_LAST


def split_syllable(ch: str) -> tuple[int, int, int]:
    """
    音节 → (初声, 中声, 终声) 下标，终声0表示无终声

    Raises:
        ValueError: 不是预组合音节
    """
    if not is_syllable(ch):
        raise ValueError(f"不是韩文音节: {ch!r}")
    index = ord(ch) - HANGUL_BASE
    lead, rest = divmod(index, VOWEL_COUNT * TAIL_COUNT)
    vowel, tail = divmod(rest, TAIL_COUNT)
    return lead, vowel, tail


def join_syllable(lead: int, vowel: int, tail: int = 0) -> str:
    """(初声, 中声, 终声) 下标 → 音节"""
    return chr(HANGUL_BASE + (lead * VOWEL_COUNT + vowel) * TAIL_COUNT + tail)


def syllable_jamo(ch: str, conjoining: bool = False) -> list[str]:
    """单个音节的2或3个字母"""
    lead, vowel, tail = split_syllable(ch)
    if conjoining:
        parts = [chr(CONJOINING_LEAD_BASE + lead), chr(CONJOINING_VOWEL_BASE + vowel)]
        if tail:
            parts.append(chr(CONJOINING_TAIL_BASE + tail))
        return parts
    parts = [LEADS[lead], VOWELS[vowel]]
    if tail:
        parts.append(TAILS[tail])
    return parts


def hangul_decompose(text: str, conjoining: bool = False) -> str:
    """
    将 U+AC00..U+D7A3 内的音节替换为其字母，其余字符保持不变

    Args:
        text: 输入文本
        conjoining: True 输出组合用字母（与NFD一致），默认输出兼容字母

    Returns:
        分解后的文本

    Examples:
        >>> hangul_decompose("한글")
        'ㅎㅏㄴㄱㅡㄹ'
    """
    out = []
    for ch in text:
        if is_syllable(ch):
            out.extend(syllable_jamo(ch, conjoining=conjoining))
        else:
            out.append(ch)
    return "".join(out)


def hangul_compose(text: str) -> str:
    """
    将连续的 初声+中声(+终声) 字母重新组合为音节；无法配对的字母原样保留

    紧随 初声+中声 的辅音仅在其后不是中声时才作为终声，
    因此 compose(decompose(s)) == s 对纯音节文本成立。

    Examples:
        >>> hangul_compose("ㅎㅏㄴㄱㅡㄹ")
        '한글'
    """
    out = []
    i = 0
    size = len(text)
    while i < size:
        ch = text[i]
        nxt = text[i + 1] if i + 1 < size else ""
        if ch in _LEAD_INDEX and nxt in _VOWEL_INDEX:
            lead = _LEAD_INDEX[ch]
            vowel = _VOWEL_INDEX[nxt]
            tail = 0
            i += 2
            if i < size and text[i] in _TAIL_INDEX:
                after = text[i + 1] if i + 1 < size else ""
                if after not in _VOWEL_INDEX:
                    tail = _TAIL_INDEX[text[i]]
                    i += 1
            out.append(join_syllable(lead, vowel, tail))
            continue
        out.append(ch)
        i += 1
    return "".join(out)
