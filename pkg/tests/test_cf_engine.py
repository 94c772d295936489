from fractions import Fraction

import pytest

from padic_cf import cf_engine as ce
from padic_cf.errors import DivisionByZero
from padic_cf.exact_arith import QuadSurd, vp
from padic_cf.floors import floor
from padic_cf.heights import PeriodicCF


def test_expand_one_third():
    cf = ce.expand(Fraction(1, 3), 5)
    assert cf.values == [2, Fraction(-3, 5)]
    assert cf.status == ce.FINITE
    assert cf.human() == "[2, -3/5] Finite"


@pytest.mark.parametrize("p", [3, 5, 7])
def test_ruban_minus_p_is_periodic(p):
    ruban = ce.expand(Fraction(-p), p, max_steps=50, kind="ruban")
    assert ruban.status == ce.PERIODIC
    assert (ruban.preperiod_len, ruban.period_len) == (1, 1)
    assert ce.expand(Fraction(-p), p, kind="browkin").status == ce.FINITE


def test_sqrt2_at_7_periodic():
    cf = ce.expand(QuadSurd(0, 1, D=2, p=7), 7, max_steps=40)
    assert cf.status == ce.PERIODIC
    assert (cf.preperiod_len, cf.period_len) == (2, 2)
    # rebuilding from the detected period gives back sqrt 2
    vals = cf.values
    pcf = PeriodicCF(7, tuple(vals[:2]), tuple(vals[2:]))
    assert pcf.value() == QuadSurd(0, 1, D=2, p=7)


def test_json_roundtrip():
    cf = ce.expand(Fraction(-17, 250), 5)
    back = ce.CFExpansion.from_json(cf.to_json())
    assert back.quotients == cf.quotients and back.status == cf.status


def test_fold_inverts_expand():
    for x in (Fraction(1, 3), Fraction(-98, 15), Fraction(123456, 7**5)):
        assert ce.fold(ce.expand(x, 7).values) == x


def test_euclid_example():
    steps = ce.euclid_algorithm(1, 3, 5)
    assert [s.q.value for s in steps] == [2, Fraction(-3, 5)]
    assert steps[-1].r == 0


def test_euclid_small_numerator_gets_zero_quotient():
    steps = ce.euclid_algorithm(5, 1, 5)
    assert steps[0].q.value == 0


def test_euclid_divide_contract():
    for x, y in [(Fraction(7), Fraction(3, 5)), (Fraction(-2, 9), Fraction(25, 4))]:
        s = ce.euclid_divide(x, y, 5)
        assert s.q == floor(x / y, 5)
        assert s.r == 0 or vp(s.r, 5) > vp(y, 5)
    with pytest.raises(DivisionByZero):
        ce.euclid_divide(1, 0, 5)


def test_convergents_and_determinant():
    cf = ce.expand(Fraction(-3271, 980), 7)
    t = ce.convergents(cf)
    for n in range(0, t.last + 1):
        assert t.determinant(n) == (-1) ** (n + 1)
    assert t.convergent(t.last) == Fraction(-3271, 980)


def test_convergents_unroll_period():
    cf = ce.expand(QuadSurd(0, 1, D=2, p=7), 7)
    t = ce.convergents(cf, 12)
    assert t.last == 11
    assert vp(t.convergent(11) ** 2 - 2, 7) >= 10


def test_law_vi_direction_on_surd():
    cf = ce.expand(QuadSurd(0, 1, D=2, p=7), 7, max_steps=40, detect_period=False)
    rep = ce.check_valuation_laws(ce.convergents(cf), cf)
    assert rep.ok, rep.violations
    assert rep.checked["vi"] >= 30


def test_growth_on_rational():
    cf = ce.expand(Fraction(987654, 3211), 5)
    g = ce.archimedean_growth_check(ce.convergents(cf))
    assert g.ok


def test_shared_prefix_gap():
    a = QuadSurd(0, 1, D=2, p=7)
    head = ce.expand(a, 7, max_steps=6, detect_period=False).values
    b = ce.fold(head[:5] + [Fraction(1, 7)])
    gap = ce.shared_prefix_gap(a, b, 7, 4)
    assert gap.holds
    assert gap.threshold == -2 * ce.convergents_of(head[:5], 7).f(4)
