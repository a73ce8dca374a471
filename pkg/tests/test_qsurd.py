import math

import mpmath
import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from glscalc.qsurd import SQRT2, SQRT85, QuadSurd, decode_number, encode_number

mpmath.mp.dps = 60

rationals = st.fractions(min_value=-1000, max_value=1000, max_denominator=50).map(lambda f: mpq(f.numerator, f.denominator))
fields = st.sampled_from([2, 3, 5, 85])


def shadow(x: QuadSurd):
    return mpmath.mpf(int(x.a.numerator)) / int(x.a.denominator) + mpmath.mpf(int(x.b.numerator)) / int(x.b.denominator) * mpmath.sqrt(x.k)


def test_basic_identities():
    assert SQRT2 * SQRT2 == 2
    assert SQRT85 * SQRT85 == 85
    assert (1 + SQRT2) * (SQRT2 - 1) == 1
    assert (3 - 2 * SQRT2).inverse() == 3 + 2 * SQRT2


def test_sign_and_order():
    assert 3 - 2 * SQRT2 > 0
    assert 1 - SQRT2 < 0
    assert QuadSurd(-2, 2, 2) > 0
    assert QuadSurd(-3, 2, 2) < 0
    assert sorted([SQRT2, mpq(7, 5), mpq(3, 2)]) == [mpq(7, 5), SQRT2, mpq(3, 2)]


def test_floor_sqrt_examples():
    # 8 (alpha0 + 8) = 77.36..., 13 (alpha0 + 8) = 125.7...
    from glscalc.constants import ALPHA0

    assert (8 * (ALPHA0 + 8)).floor_sqrt() == 8
    assert (13 * (ALPHA0 + 8)).floor_sqrt() == 11
    assert (SQRT2 * 2).floor() == 2
    assert (SQRT2 * 2).ceil() == 3


def test_rational_floor_sqrt_perfect_square():
    assert QuadSurd(mpq(49, 4), 0, 2).floor_sqrt() == 3
    assert QuadSurd(mpq(49, 4), 0, 2).ceil_sqrt() == 4
    assert QuadSurd(16, 0, 2).floor_sqrt() == 4
    assert QuadSurd(16, 0, 2).ceil_sqrt() == 4


def test_decimal_against_sympy():
    x = (31 - 3 * SQRT85) / 2
    ref = sympy.N((31 - 3 * sympy.sqrt(85)) / 2, 30)
    assert abs(sympy.Float(x.decimal(12), 30) - ref) < sympy.Float("1e-11")


@given(rationals, rationals, fields)
@settings(max_examples=300, deadline=None)
def test_floor_brackets_value(a, b, k):
    x = QuadSurd(a, b, k)
    f = x.floor()
    assert f <= x < f + 1
    assert x.ceil() - 1 < x <= x.ceil()
    assert f == math.floor(shadow(x))


@given(rationals.filter(lambda q: q >= 0), rationals.filter(lambda q: q >= 0), fields)
@settings(max_examples=300, deadline=None)
def test_floor_sqrt_brackets(a, b, k):
    x = QuadSurd(a, b, k)
    r = x.floor_sqrt()
    assert r * r <= x < (r + 1) * (r + 1)
    c = x.ceil_sqrt()
    assert (c - 1) * (c - 1) < x <= c * c or (c == 0 and x == 0)


@given(rationals, rationals, rationals, rationals, fields)
@settings(max_examples=200, deadline=None)
def test_field_axioms(a, b, c, d, k):
    x, y = QuadSurd(a, b, k), QuadSurd(c, d, k)
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) - y == x
    if y != 0:
        assert (x / y) * y == x
    assert (x < y) == (shadow(x) < shadow(y)) or x == y


@given(rationals, rationals, st.sampled_from([2, 85]))
def test_encoding_round_trip(a, b, k):
    x = QuadSurd(a, b, k)
    back = decode_number(encode_number(x))
    assert back == x


def test_rational_encoding_is_string():
    assert encode_number(mpq(3, 4)) == "3/4"
    assert decode_number("3/4") == mpq(3, 4)


def test_mixed_fields_rejected():
    with pytest.raises(ValueError):
        _ = SQRT2 + SQRT85
