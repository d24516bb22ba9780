"""
韩文音节/字母转换测试
"""

import unicodedata

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ceps_eval.utils.hangul import (
    hangul_compose,
    hangul_decompose,
    join_syllable,
    split_syllable,
)

syllables = st.characters(min_codepoint=0xAC00, max_codepoint=0xD7A3)
syllable_text = st.text(alphabet=syllables)
mixed_text = st.text(alphabet=st.one_of(syllables, st.sampled_from(list("abc XYZ.,!0"))))


def test_decompose_examples():
    assert hangul_decompose("한") == "ㅎㅏㄴ"
    assert hangul_decompose("한글") == "ㅎㅏㄴㄱㅡㄹ"
    assert len(hangul_decompose("한글")) == 6


def test_non_hangul_is_unchanged():
    assert hangul_decompose("abc") == "abc"
    assert hangul_compose("abc") == "abc"
    assert hangul_compose("") == ""
    assert hangul_decompose("") == ""


def test_lone_vowel_stays():
    assert hangul_compose("ㅏ") == "ㅏ"
    assert hangul_compose("ㅎ") == "ㅎ"


def test_compose_examples():
    assert hangul_compose("ㅎㅏㄴㄱㅡㄹ") == "한글"
    assert hangul_compose("ㄱㅏㅇㅏ") == "가아"
    assert hangul_compose("ㄷㅏㄺ") == "닭"


def test_compose_conjoining_jamo():
    assert hangul_compose("\u1112\u1161\u11ab") == "\ud55c"


def test_split_and_join():
    assert split_syllable("가") == (0, 0, 0)
    assert split_syllable("힣") == (18, 20, 27)
    assert join_syllable(18, 20, 27) == "힣"
    with pytest.raises(ValueError):
        split_syllable("a")


@given(mixed_text)
def test_round_trip(text):
    assert hangul_compose(hangul_decompose(text)) == text


@given(syllable_text)
def test_conjoining_decomposition_matches_nfd(text):
    assert hangul_decompose(text, conjoining=True) == unicodedata.normalize("NFD", text)


@given(syllable_text)
def test_decomposition_length(text):
    size = len(hangul_decompose(text))
    assert 2 * len(text) <= size <= 3 * len(text)
