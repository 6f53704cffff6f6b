from fractions import Fraction
from itertools import islice

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ordmet.rationals import (
    calkin_wilf,
    calkin_wilf_stream,
    format_rational,
    parse_rational,
    stern_diatomic,
)


def test_parse_canonicalizes():
    assert parse_rational("2/4") == Fraction(1, 2)
    assert parse_rational("3") == Fraction(3)
    assert parse_rational("-6/4") == Fraction(-3, 2)
    assert parse_rational(" 7/2 ") == Fraction(7, 2)


@pytest.mark.parametrize("bad", ["", "abc", "1/0", "1.5", "1/-2", "1/2/3", "/3"])
def test_parse_rejects_malformed(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


def test_format_always_carries_denominator():
    assert format_rational(Fraction(1)) == "1/1"
    assert format_rational(Fraction(2, 4)) == "1/2"
    assert format_rational(Fraction(-3, 2)) == "-3/2"


@given(st.integers(-10**6, 10**6), st.integers(1, 10**6))
def test_parse_format_round_trip(num, den):
    q = Fraction(num, den)
    assert parse_rational(format_rational(q)) == q


def test_stern_diatomic_prefix():
    # 0, 1, 1, 2, 1, 3, 2, 3, 1, 4, ...
    assert [stern_diatomic(i) for i in range(10)] == [0, 1, 1, 2, 1, 3, 2, 3, 1, 4]


def test_calkin_wilf_prefix():
    expected = [
        Fraction(1),
        Fraction(1, 2),
        Fraction(2),
        Fraction(1, 3),
        Fraction(3, 2),
        Fraction(2, 3),
        Fraction(3),
    ]
    assert [calkin_wilf(i) for i in range(7)] == expected


def test_calkin_wilf_matches_stream_recurrence():
    # independent oracle: the next-value recurrence
    from_stream = list(islice(calkin_wilf_stream(), 512))
    by_index = [calkin_wilf(i) for i in range(512)]
    assert from_stream == by_index


def test_calkin_wilf_no_duplicates_and_positive():
    seen = [calkin_wilf(i) for i in range(2000)]
    assert len(set(seen)) == 2000
    assert all(q > 0 for q in seen)


def test_calkin_wilf_hits_small_rationals():
    prefix = {calkin_wilf(i) for i in range(256)}
    for num in range(1, 6):
        for den in range(1, 6):
            assert Fraction(num, den) in prefix
