from fractions import Fraction

import pytest

from padic_cf.errors import DivisionByZero, MixedField, NotResidue
from padic_cf.exact_arith import (
    PAdicUnitFrac,
    QuadSurd,
    abs_p,
    centered_mod,
    is_s_integer,
    parse_value,
    split_square,
    vp,
)


def test_valuation_basics():
    assert vp(Fraction(50, 3), 5) == 2
    assert vp(Fraction(3, 125), 5) == -3
    assert vp(0, 5) == float("inf")
    assert abs_p(Fraction(1, 25), 5) == 25
    assert abs_p(0, 7) == 0


def test_s_integers():
    assert is_s_integer(Fraction(4, 25), 5)
    assert not is_s_integer(Fraction(1, 3), 5)


def test_centered_mod_range():
    for n in range(-40, 40):
        r = centered_mod(n, 7)
        assert -3 <= r <= 3 and (n - r) % 7 == 0


def test_unit_frac_roundtrip():
    b = PAdicUnitFrac.of(Fraction(-3, 125), 5)
    assert (b.u, b.a) == (-3, 3)
    assert str(b) == "-3/5^3"
    assert PAdicUnitFrac.from_json(b.to_json(), 5) == b
    assert PAdicUnitFrac.from_json("4/25", 5).value == Fraction(4, 25)
    with pytest.raises(ValueError):
        PAdicUnitFrac(5, 10, 1)
    with pytest.raises(ValueError):
        PAdicUnitFrac.of(Fraction(1, 3), 5)


def test_surd_field_arithmetic():
    x = QuadSurd(1, 1, 1, D=2, p=7)
    y = x.conjugate()
    assert x * y == -1
    assert x.norm() == -1
    assert x * x.inverse() == 1
    assert (x**2) == QuadSurd(3, 2, 1, D=2, p=7)
    assert isinstance(x - x + 3, Fraction)


def test_surd_requires_residue():
    with pytest.raises(NotResidue):
        QuadSurd(0, 1, 1, D=3, p=7)


def test_surd_mixed_fields():
    with pytest.raises(MixedField):
        QuadSurd(0, 1, D=2, p=7) + QuadSurd(0, 1, D=11, p=7)


def test_split_square():
    assert split_square(72) == (6, 2)
    assert split_square(101) == (1, 101)


def test_parse_value():
    assert parse_value("-3/5") == Fraction(-3, 5)
    s = parse_value("(1 - 2*sqrt(2))/3", p=7)
    assert (s.P, s.Q, s.R, s.D) == (1, -2, 3, 2)
    with pytest.raises(DivisionByZero):
        parse_value("1/0")
