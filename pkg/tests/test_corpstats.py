"""
语料统计测试：字素清单、一元熵、Pearson相关
"""

import math

import numpy as np
import pandas as pd
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats as sp_stats

from ceps_eval.corpstats import corr_matrix, inventory, merge_counts, pearson, significance
from ceps_eval.exceptions import CorrelationError
from ceps_eval.types import SegmentationScheme

SCRIPT_COLUMNS = ["cer", "ceps", "graphemes", "entropy", "logographicity", "phonemes"]
PHONO_COLUMNS = ["cer", "ceps", "graphemes", "entropy", "phonemes"]

# 由17行结果表重算的相关系数
SCRIPT_EXPECTED = {
    ("cer", "ceps"): 0.765275,
    ("cer", "graphemes"): 0.854049,
    ("cer", "entropy"): 0.812184,
    ("cer", "phonemes"): -0.369604,
    ("ceps", "graphemes"): 0.485239,
    ("ceps", "entropy"): 0.410018,
    ("ceps", "phonemes"): -0.659225,
    ("graphemes", "entropy"): 0.932251,
    ("graphemes", "phonemes"): -0.135608,
    ("entropy", "phonemes"): -0.078552,
}

# 表意度列只保留了4位小数，相关系数只能复现到1e-3
SCRIPT_LOGOGRAPHICITY = {
    ("cer", "logographicity"): 0.763578,
    ("ceps", "logographicity"): 0.608001,
    ("graphemes", "logographicity"): 0.718030,
    ("entropy", "logographicity"): 0.665734,
    ("logographicity", "phonemes"): -0.595294,
}

PHONO_EXPECTED = {
    ("cer", "ceps"): 0.894968,
    ("ceps", "graphemes"): 0.180008,
    ("ceps", "entropy"): 0.165454,
    ("ceps", "phonemes"): 0.019303,
}

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


def r_of(matrix, a, b):
    return matrix.r[matrix.variables.index(a)][matrix.variables.index(b)]


@pytest.fixture
def script_table(data_dir):
    return pd.read_csv(data_dir / "script_results.csv")


@pytest.fixture
def phono_table(data_dir):
    return pd.read_csv(data_dir / "phonographic_results.csv")


# ---------------------------------------------------------------- 字素清单

def test_single_symbol():
    stats = inventory(["aaaa"])
    assert stats.inventory_size == 1
    assert stats.entropy_bits == 0.0


def test_two_symbols():
    stats = inventory(["abab"])
    assert stats.inventory_size == 2
    assert stats.entropy_bits == pytest.approx(1.0, abs=1e-12)


def test_uniform_four_symbols():
    assert inventory(["abcd", "dcba"]).entropy_bits == pytest.approx(2.0, abs=1e-12)


def test_empty_corpus():
    stats = inventory([])
    assert (stats.inventory_size, stats.entropy_bits) == (0, 0.0)


def test_whitespace_excluded_by_default():
    assert inventory(["a b"]).inventory_size == 2
    assert inventory(["a b"], keep_whitespace=True).inventory_size == 3


def test_inventory_depends_on_scheme():
    nfd = SegmentationScheme("codepoint", "nfd")
    assert inventory(["한글"]).inventory_size == 2
    assert inventory(["한글"], nfd).inventory_size == 6


def test_merge_counts_matches_single_pass():
    texts = ["hello world", "ceps eval", "abcabc"]
    shards = [inventory([t]).counts for t in texts]
    merged, single = merge_counts(shards), inventory(texts)
    assert merged.counts == single.counts
    assert merged.inventory_size == single.inventory_size
    assert merged.entropy_bits == pytest.approx(single.entropy_bits, abs=1e-12)


@given(st.text(alphabet="abcdefgh", min_size=1))
def test_entropy_bounds(text):
    stats = inventory([text])
    assert 0.0 <= stats.entropy_bits <= math.log2(stats.inventory_size) + 1e-12


@given(st.lists(st.text(alphabet="abcxyz"), min_size=1), st.randoms())
def test_inventory_ignores_order(texts, random):
    shuffled = list(texts)
    random.shuffle(shuffled)
    first, second = inventory(texts), inventory(shuffled)
    assert first.counts == second.counts
    assert first.entropy_bits == pytest.approx(second.entropy_bits, abs=1e-12)


# ---------------------------------------------------------------- Pearson

def test_perfect_linear():
    r, p = pearson([1, 2, 3, 4], [3, 5, 7, 9])
    assert r == pytest.approx(1.0, abs=1e-12)
    assert p == pytest.approx(0.0, abs=1e-12)


def test_p_value_matches_t_distribution():
    rng = np.random.default_rng(3)
    x = rng.normal(size=25)
    y = 0.3 * x + rng.normal(size=25)
    r, p = pearson(x, y)
    expected = sp_stats.pearsonr(x, y)
    assert r == pytest.approx(expected[0], rel=1e-9)
    assert p == pytest.approx(expected[1], rel=1e-6)


def test_constant_column_names_pair():
    with pytest.raises(CorrelationError, match="a ↔ b"):
        corr_matrix({"a": [1.0, 1.0, 1.0], "b": [1.0, 2.0, 3.0]})


def test_too_few_rows():
    with pytest.raises(CorrelationError):
        pearson([1, 2], [2, 1])


def test_length_mismatch():
    with pytest.raises(CorrelationError):
        pearson([1, 2, 3], [1, 2])


def test_missing_column():
    with pytest.raises(CorrelationError, match="zzz"):
        corr_matrix({"a": [1, 2, 3], "b": [3, 1, 2]}, columns=["a", "zzz"])


@given(
    st.lists(st.tuples(finite, finite), min_size=3, max_size=30),
    st.floats(0.1, 10.0),
    finite,
)
def test_symmetric_and_affine_invariant(pairs, scale, shift):
    x = [a for a, _ in pairs]
    y = [b for _, b in pairs]
    if np.ptp(x) < 1e-3 or np.ptp(y) < 1e-3:
        return
    r_xy, _ = pearson(x, y)
    r_yx, _ = pearson(y, x)
    r_scaled, _ = pearson([scale * v + shift for v in x], y)
    assert r_xy == pytest.approx(r_yx, abs=1e-9)
    assert r_scaled == pytest.approx(r_xy, abs=1e-6)
    assert -1.0 <= r_xy <= 1.0


# ---------------------------------------------------------------- 结果表复现

def test_script_table_correlations(script_table):
    matrix = corr_matrix(script_table, columns=SCRIPT_COLUMNS)
    assert matrix.n == 17
    for (a, b), expected in SCRIPT_EXPECTED.items():
        assert r_of(matrix, a, b) == pytest.approx(expected, abs=1e-4), (a, b)
    for (a, b), expected in SCRIPT_LOGOGRAPHICITY.items():
        assert r_of(matrix, a, b) == pytest.approx(expected, abs=1e-3), (a, b)


def test_script_table_default_columns_skip_text(script_table):
    matrix = corr_matrix(script_table)
    assert matrix.variables == SCRIPT_COLUMNS


def test_script_table_significance(script_table):
    matrix = corr_matrix(script_table, columns=SCRIPT_COLUMNS)
    for other in ("graphemes", "entropy", "logographicity"):
        assert matrix.significant("cer", other)
    assert not matrix.significant("cer", "phonemes")

    rows = {(row["a"], row["b"]): row for row in significance(matrix)}
    assert len(rows) == 15
    assert rows[("cer", "phonemes")]["p"] > 0.05


def test_phono_table_correlations(phono_table):
    matrix = corr_matrix(phono_table, columns=PHONO_COLUMNS)
    assert matrix.n == 13
    for (a, b), expected in PHONO_EXPECTED.items():
        assert r_of(matrix, a, b) == pytest.approx(expected, abs=1e-4), (a, b)


def test_matrix_is_symmetric_with_unit_diagonal(script_table):
    matrix = corr_matrix(script_table, columns=SCRIPT_COLUMNS)
    size = len(matrix.variables)
    for i in range(size):
        assert matrix.r[i][i] == 1.0
        for j in range(size):
            assert matrix.r[i][j] == matrix.r[j][i]
            assert matrix.p_values[i][j] == matrix.p_values[j][i]
