"""Unit tests for words, truncated series arithmetic, and the two backends."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import groupby
from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bchdenom.errors import BudgetError
from bchdenom.freealgebra import (
    DegreeTable,
    TruncatedSeries,
    Word,
    all_words,
    bch_coeff_word,
    bch_series,
    series_exp_generator,
    series_log1p,
    series_multiply,
    staircase_coeff,
)


def W(text, alphabet_size=2):
    return Word.from_string(text, alphabet_size)


# ---------------------------------------------------------------------------
# words and packing


@given(st.data())
def test_pack_round_trips(data):
    K = data.draw(st.integers(min_value=2, max_value=5))
    letters = data.draw(st.lists(st.integers(min_value=0, max_value=K - 1), max_size=10))
    word = Word(tuple(letters))
    assert Word.unpack(word.pack(K), word.degree, K) == word


def test_packed_order_is_lexicographic():
    for K in (2, 3):
        for degree in range(5):
            words = list(all_words(degree, K))
            assert words == sorted(words)
            assert [w.pack(K) for w in words] == list(range(K**degree))


def test_word_strings():
    assert W("AAB").letters == (0, 0, 1)
    assert W("AAB").to_string(2) == "AAB"
    assert Word.from_string("0,0,1", 30).letters == (0, 0, 1)
    assert Word((0, 5, 29)).to_string(30) == "0,5,29"
    assert W("").degree == 0


def test_word_string_rejects_bad_input():
    with pytest.raises(ValueError):
        W("AXB")  # X is outside a two-letter alphabet
    with pytest.raises(ValueError):
        W("ab")
    with pytest.raises(ValueError):
        Word.from_string("0,2", 2)
    with pytest.raises(ValueError):
        W("ABC")  # C needs alphabet size 3


def test_degree_table_size_checked():
    with pytest.raises(ValueError):
        DegreeTable(2, 2, [Fraction(0)] * 3)


# ---------------------------------------------------------------------------
# staircase coefficients


def staircase_oracle(word, alphabet_size):
    """Independent route: group into runs, require strictly increasing letters."""
    runs = [(letter, len(list(group))) for letter, group in groupby(word.letters)]
    letters = [letter for letter, _ in runs]
    if letters != sorted(set(letters)):
        return Fraction(0)
    value = Fraction(1)
    for _, length in runs:
        value /= factorial(length)
    return value


def test_staircase_examples():
    assert staircase_coeff(W("AAB")) == Fraction(1, 2)
    assert staircase_coeff(W("BA")) == 0
    assert staircase_coeff(W("")) == 1
    assert staircase_coeff(W("AACC", 3), 3) == Fraction(1, 4)


def test_staircase_matches_oracle():
    for K, max_degree in ((2, 6), (3, 4)):
        for degree in range(max_degree + 1):
            for word in all_words(degree, K):
                assert staircase_coeff(word, K) == staircase_oracle(word, K)


# ---------------------------------------------------------------------------
# series arithmetic


def random_series(K, N, seed, density=0.6):
    rng = random.Random(seed)
    series = TruncatedSeries.zero(K, N)
    for table in series.tables:
        for i in range(len(table.coefficients)):
            if rng.random() < density:
                table.coefficients[i] = Fraction(rng.randint(-5, 5), rng.randint(1, 6))
    return series


def test_series_exp_generator():
    e_a = series_exp_generator(0, 5, 2)
    assert e_a.coefficient(W("AAA")) == Fraction(1, 6)
    assert e_a.coefficient(W("AB")) == 0
    assert e_a.constant_term == 1


def test_series_multiply_exponentials():
    e_a = series_exp_generator(0, 3, 2)
    e_b = series_exp_generator(1, 3, 2)
    product = series_multiply(e_a, e_b)
    assert product.coefficient(W("AB")) == 1
    square = series_multiply(e_a, e_a)
    assert square.coefficient(W("AA")) == 2  # e^{2A}: 2^2/2!


def test_series_multiply_identity_and_associativity():
    one = TruncatedSeries.constant(Fraction(1), 2, 4)
    x = random_series(2, 4, seed=11)
    y = random_series(2, 4, seed=23)
    z = random_series(2, 4, seed=37)
    assert series_multiply(x, one) == x
    assert series_multiply(one, x) == x
    assert series_multiply(series_multiply(x, y), z) == series_multiply(x, series_multiply(y, z))


def test_series_multiply_rejects_mismatch():
    with pytest.raises(ValueError):
        series_multiply(TruncatedSeries.zero(2, 3), TruncatedSeries.zero(3, 3))
    with pytest.raises(ValueError):
        series_multiply(TruncatedSeries.zero(2, 3), TruncatedSeries.zero(2, 4))


def test_series_log1p_single_letter():
    y = TruncatedSeries.zero(2, 7)
    y.tables[1].coefficients[0] = Fraction(1)  # Y = A
    log = series_log1p(y)
    for k in range(1, 8):
        assert log.coefficient(Word((0,) * k)) == Fraction((-1) ** (k + 1), k)
    assert log.coefficient(W("AB")) == 0


def test_series_log1p_degree_two():
    e_a = series_exp_generator(0, 2, 2)
    e_b = series_exp_generator(1, 2, 2)
    y = series_multiply(e_a, e_b)
    y.tables[0].coefficients[0] -= 1
    log = series_log1p(y)
    assert log.coefficient(W("AB")) == Fraction(1, 2)
    assert log.coefficient(W("BA")) == Fraction(-1, 2)
    assert log.coefficient(W("AA")) == 0


def test_series_log1p_zero_and_errors():
    zero = TruncatedSeries.zero(2, 3)
    assert series_log1p(zero) == zero
    with pytest.raises(ValueError):
        series_log1p(TruncatedSeries.constant(Fraction(1), 2, 3))


# ---------------------------------------------------------------------------
# the full series


def test_bch_series_degree_one():
    series = bch_series(2, 1)
    assert series.tables[1].coefficients == [Fraction(1), Fraction(1)]


def test_bch_series_pinned_degree_11(series2_14):
    assert series2_14.coefficient(W("AAAAAAAABBB")) == Fraction(1, 1247400)


def test_bch_series_three_letters_degree_two():
    series = bch_series(3, 2)
    for i in range(3):
        for j in range(3):
            expected = Fraction(1, 2) if i < j else Fraction(-1, 2) if i > j else 0
            assert series.coefficient(Word((i, j))) == expected


def test_bch_series_validation():
    with pytest.raises(ValueError):
        bch_series(1, 3)
    with pytest.raises(ValueError):
        bch_series(2, 0)
    with pytest.raises(BudgetError):
        bch_series(2, 24, table_budget=1 << 20)


# ---------------------------------------------------------------------------
# per-word backend


def test_bch_coeff_word_examples():
    assert bch_coeff_word(W("AB")) == Fraction(1, 2)
    assert bch_coeff_word(W("BA")) == Fraction(-1, 2)
    assert bch_coeff_word(W("AAAAAAAABBB")) == Fraction(1, 1247400)


def test_bch_coeff_word_pure_powers_vanish():
    for n in range(2, 13):
        assert bch_coeff_word(Word((0,) * n)) == 0
        assert bch_coeff_word(Word((1,) * n)) == 0
    assert bch_coeff_word(Word((0,))) == 1


def test_bch_coeff_word_rejects_empty():
    with pytest.raises(ValueError):
        bch_coeff_word(W(""))


def test_backends_agree_small():
    series = bch_series(2, 5)
    for degree in range(1, 6):
        for word in all_words(degree, 2):
            assert bch_coeff_word(word, 2) == series.coefficient(word)
    series3 = bch_series(3, 3)
    for degree in range(1, 4):
        for word in all_words(degree, 3):
            assert bch_coeff_word(word, 3) == series3.coefficient(word)


def test_substitution_collapse_small():
    series = bch_series(2, 6)
    assert sum(series.tables[1].coefficients) == 2
    for degree in range(2, 7):
        assert sum(series.tables[degree].coefficients) == 0
