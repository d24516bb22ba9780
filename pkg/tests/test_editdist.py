"""
编辑距离测试

CEPS_RANDOM_PAIRS 环境变量控制随机长序列对照的样本数（默认10000）
"""

import itertools
import os

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ceps_eval.editdist import (
    align,
    distance_matrix,
    levenshtein,
    levenshtein_fast,
    replay,
)
from ceps_eval.exceptions import SchemeMismatchError
from ceps_eval.segmenter import segment
from ceps_eval.types import SegmentationScheme, SliceSequence

CP = SegmentationScheme("codepoint", "none")
RANDOM_PAIRS = int(os.environ.get("CEPS_RANDOM_PAIRS", "10000"))

short_text = st.text(alphabet="abcd", max_size=12)


def seq(text: str) -> SliceSequence:
    return segment(text, CP)


def check_summary(summary):
    assert summary.distance == summary.substitutions + summary.deletions + summary.insertions
    assert summary.ref_len - summary.deletions + summary.insertions == summary.hyp_len
    assert summary.distance <= max(summary.ref_len, summary.hyp_len)
    assert min(summary.substitutions, summary.deletions, summary.insertions) >= 0


def test_identical():
    summary = levenshtein(seq("abc"), seq("abc"))
    assert summary.distance == 0
    check_summary(summary)


def test_all_deleted():
    summary = levenshtein(seq("abc"), seq(""))
    assert (summary.distance, summary.deletions) == (3, 3)


def test_kitten_sitting():
    summary = levenshtein(seq("kitten"), seq("sitting"))
    assert summary.distance == 3
    assert summary.substitutions == 2
    assert summary.insertions == 1
    assert summary.deletions == 0
    check_summary(summary)


def test_alignment_ops():
    steps = align(seq("ab"), seq("ab")).steps
    assert [s.op for s in steps] == ["match", "match"]

    steps = align(seq("a"), seq("b")).steps
    assert [s.op for s in steps] == ["substitute"]


def test_scheme_mismatch():
    with pytest.raises(SchemeMismatchError):
        levenshtein(seq("abc"), segment("abc", SegmentationScheme("grapheme", "nfc")))
    with pytest.raises(SchemeMismatchError):
        levenshtein_fast(seq("abc"), segment("abc", SegmentationScheme("word", "nfc")))


def test_word_slices():
    word = SegmentationScheme("word", "nfc")
    summary = levenshtein(
        segment("to our getting to know each other", word),
        segment("to our getting to know each others", word),
    )
    assert summary.distance == 1
    assert summary.ref_len == 7


def test_long_identical_sequences():
    text = "ab" * 50_000
    summary = levenshtein_fast(seq(text), seq(text))
    assert summary.distance == 0
    assert summary.ref_len == 100_000


def test_fast_breakdown_matches_full():
    assert levenshtein_fast(seq("kitten"), seq("sitting"), breakdown=True) == levenshtein(
        seq("kitten"), seq("sitting")
    )


def test_exhaustive_small_alphabet():
    words = [""] + [
        "".join(chars)
        for size in range(1, 7)
        for chars in itertools.product("ab", repeat=size)
    ]
    for a in words:
        for b in words:
            expected = int(distance_matrix(a, b)[-1, -1])
            assert levenshtein_fast(seq(a), seq(b)).distance == expected


def test_random_long_pairs():
    rng = np.random.default_rng(20240101)
    alphabet = np.array(list("abcdefgh"))
    for _ in range(RANDOM_PAIRS):
        m, n = rng.integers(0, 501, size=2)
        size = int(rng.integers(2, len(alphabet) + 1))
        a = "".join(rng.choice(alphabet[:size], size=int(m)))
        b = "".join(rng.choice(alphabet[:size], size=int(n)))
        expected = int(distance_matrix(a, b)[-1, -1])
        fast = levenshtein_fast(seq(a), seq(b))
        assert fast.distance == expected
        check_summary(fast)


def test_random_pairs_summary_invariants():
    rng = np.random.default_rng(7)
    for _ in range(200):
        a = "".join(rng.choice(list("abc"), size=int(rng.integers(0, 60))))
        b = "".join(rng.choice(list("abc"), size=int(rng.integers(0, 60))))
        check_summary(levenshtein(seq(a), seq(b)))


@given(short_text, short_text)
def test_replay_reproduces_hypothesis(a, b):
    alignment = align(seq(a), seq(b))
    assert "".join(replay(seq(a).slices, alignment)) == b
    assert alignment.cost == levenshtein(seq(a), seq(b)).distance


@given(short_text, short_text)
def test_symmetry_and_identity(a, b):
    d_ab = levenshtein(seq(a), seq(b)).distance
    assert d_ab == levenshtein(seq(b), seq(a)).distance
    assert (d_ab == 0) == (a == b)


@given(short_text, short_text, short_text)
def test_triangle_inequality(a, b, c):
    d = lambda x, y: levenshtein_fast(seq(x), seq(y)).distance
    assert d(a, c) <= d(a, b) + d(b, c)


@given(short_text, short_text)
def test_fast_equals_full(a, b):
    assert levenshtein_fast(seq(a), seq(b)).distance == levenshtein(seq(a), seq(b)).distance
