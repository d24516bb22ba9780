"""
注意力扩散测试
"""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ceps_eval.exceptions import SpreadError
from ceps_eval.logospread import mask_matrix, spread, spread_corpus
from ceps_eval.types import AttentionCase


def case(matrix, k, span, word_id="w"):
    return AttentionCase(
        matrix=tuple(tuple(float(v) for v in row) for row in matrix),
        target_pron_len=k,
        target_span=span,
        word_id=word_id,
    )


def test_all_mass_inside_target():
    assert spread(case([[1, 0], [0, 1]], 2, (0, 1))) == 0.0


def test_all_mass_outside_target():
    assert spread(case([[0, 1], [1, 0]], 1, (0, 0))) == 1.0


def test_uniform_attention():
    assert spread(case([[1, 1], [1, 1]], 1, (0, 0))) == pytest.approx(0.75)


def test_mask_shape():
    mask = mask_matrix((3, 4), 2, (1, 2))
    assert mask.shape == (3, 4)
    assert mask.sum() == 12 - 4
    assert mask[0, 1] == 0 and mask[1, 2] == 0 and mask[2, 1] == 1


def test_transpose():
    # 行为编码端、列为解码端
    encoder_major = [[1, 0, 0], [0, 0, 1]]
    assert spread(case(encoder_major, 1, (0, 0)), transpose=True) == pytest.approx(0.5)


@pytest.mark.parametrize(
    "matrix, k, span, pattern",
    [
        ([[0, 0], [0, 0]], 1, (0, 0), "总和为0"),
        ([[1, 1]], 2, (0, 0), "k=2"),
        ([[1, 1]], 0, (0, 0), "k=0"),
        ([[1, 1]], 1, (1, 2), "越界"),
        ([[1, -1]], 1, (0, 0), "负值"),
    ],
)
def test_invalid_cases(matrix, k, span, pattern):
    with pytest.raises(SpreadError, match=pattern):
        spread(case(matrix, k, span))


def test_corpus_mean():
    result = spread_corpus([
        case([[1, 0], [0, 1]], 2, (0, 1), "a"),
        case([[0, 1], [1, 0]], 1, (0, 0), "b"),
    ])
    assert result.s_token == pytest.approx(0.5)
    assert [w for w, _ in result.per_word] == ["a", "b"]


def test_empty_corpus():
    with pytest.raises(SpreadError):
        spread_corpus([])


matrices = st.integers(2, 6).flatmap(
    lambda rows: st.integers(2, 6).flatmap(
        lambda cols: st.lists(
            st.lists(st.floats(0.01, 5.0), min_size=cols, max_size=cols),
            min_size=rows,
            max_size=rows,
        )
    )
)


@given(matrices, st.floats(1e-3, 1e3))
def test_scaling_invariance(matrix, scale):
    rows, cols = len(matrix), len(matrix[0])
    base = case(matrix, rows // 2 or 1, (0, cols - 1))
    scaled = case(np.asarray(matrix) * scale, rows // 2 or 1, (0, cols - 1))
    value = spread(base)
    assert spread(scaled) == pytest.approx(value, abs=1e-12)
    assert 0.0 <= value <= 1.0


@given(st.lists(matrices, min_size=1, max_size=8), st.randoms())
def test_corpus_mean_ignores_order(items, random):
    cases = [case(m, 1, (0, 0), str(i)) for i, m in enumerate(items)]
    shuffled = list(cases)
    random.shuffle(shuffled)
    assert spread_corpus(shuffled).s_token == pytest.approx(spread_corpus(cases).s_token, abs=1e-12)


def test_sample_file(sample_cases):
    from ceps_eval.loader import read_cases

    result = spread_corpus(read_cases(sample_cases))
    assert result.s_token == pytest.approx((0.0 + 1.0 + 0.75) / 3)
