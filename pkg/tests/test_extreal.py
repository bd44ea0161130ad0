from __future__ import annotations

import itertools
import math
from fractions import Fraction

import pytest

from trajint.extreal import (
    INF,
    NEG_INF,
    ext_add,
    ext_inf,
    ext_scale,
    ext_sub,
    ext_sum,
    format_ext,
    parse_ext,
    to_jsonable,
)

SAMPLES = [NEG_INF, Fraction(-3), Fraction(0), Fraction(5, 2), INF]


@pytest.mark.parametrize(
    "a, b, expected",
    [
        (INF, NEG_INF, INF),
        (NEG_INF, INF, INF),
        (Fraction(3), Fraction(4), Fraction(7)),
        (NEG_INF, Fraction(5), NEG_INF),
        (Fraction(5), INF, INF),
    ],
)
def test_ext_add_table(a, b, expected):
    assert ext_add(a, b) == expected


@pytest.mark.parametrize(
    "c, a, expected",
    [
        (0, INF, 0),
        (0, NEG_INF, 0),
        (2, 3, 6),
        (-1, INF, NEG_INF),
        (Fraction(1, 2), NEG_INF, NEG_INF),
        (-2, NEG_INF, INF),
    ],
)
def test_ext_scale_table(c, a, expected):
    assert ext_scale(c, a) == expected


def test_zero_times_infinity_keeps_rational_type():
    assert isinstance(ext_scale(Fraction(0), INF), Fraction)


@pytest.mark.parametrize("a, b", list(itertools.product(SAMPLES, SAMPLES)))
def test_addition_is_commutative_on_all_sign_combinations(a, b):
    assert ext_add(a, b) == ext_add(b, a)


@pytest.mark.parametrize("a, b", list(itertools.product(SAMPLES, SAMPLES)))
def test_subtraction_is_addition_of_negation(a, b):
    assert ext_sub(a, b) == ext_add(a, -b)


@pytest.mark.parametrize("a, b", list(itertools.product(SAMPLES, SAMPLES)))
def test_plus_infinity_absorbs(a, b):
    if INF in (a, b):
        assert ext_add(a, b) == INF
    elif NEG_INF in (a, b):
        assert ext_add(a, b) == NEG_INF
    else:
        assert ext_add(a, b) == a + b


def test_order_is_total():
    assert sorted(reversed(SAMPLES)) == SAMPLES


def test_infimum_of_empty_set_is_plus_infinity():
    assert ext_inf([]) == INF
    assert ext_inf([Fraction(1), Fraction(-2)]) == -2


def test_ext_sum_mixed_infinities():
    assert ext_sum([Fraction(1), NEG_INF, INF]) == INF
    assert ext_sum([Fraction(1), NEG_INF]) == NEG_INF


def test_scale_rejects_infinite_factor():
    with pytest.raises(ValueError):
        ext_scale(INF, 1)


@pytest.mark.parametrize(
    "text, exact, expected",
    [
        ("inf", True, INF),
        ("-inf", False, NEG_INF),
        ("1/3", True, Fraction(1, 3)),
        ("0.25", True, Fraction(1, 4)),
        ("0.25", False, 0.25),
        (3, True, Fraction(3)),
        (0.1, True, Fraction(1, 10)),
    ],
)
def test_parse_ext(text, exact, expected):
    assert parse_ext(text, exact) == expected


@pytest.mark.parametrize("bad", ["abc", "1/0", True, math.nan])
def test_parse_ext_rejects(bad):
    with pytest.raises(ValueError):
        parse_ext(bad)


def test_json_encoding_round_trips():
    for x in [INF, NEG_INF, Fraction(7, 3), Fraction(4)]:
        assert parse_ext(to_jsonable(x)) == x
    assert format_ext(Fraction(1, 3)) == "1/3"
    assert format_ext(1 / 3) == "0.3333333333"
