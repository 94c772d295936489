import itertools
import random
from decimal import Decimal, getcontext
from fractions import Fraction

import pytest

from padic_cf import families as fm
from padic_cf.cf_engine import expand
from padic_cf.errors import InfeasibleSpec, RationalSlope
from padic_cf.exact_arith import QuadSurd
from padic_cf.heights import PeriodicCF

F = Fraction
POOL = (F(1, 5), F(2, 25), F(-2, 25))


def test_hypothesis1_paper_prefix():
    rep = fm.hypothesis1_check([F(4, 25), F(-3, 125)], 5)
    assert rep.passes
    assert (rep.a, rep.fib) == (2, 2)
    assert rep.bound_sq == F(3, 14) * F(5**4, 4)


def test_hypothesis1_exempt_and_failing():
    assert fm.hypothesis1_check([F(1, 7)] * 9, 7).passes
    rep = fm.hypothesis1_check([F(13, 25)], 5)
    assert 14 * 13**2 >= 3 * 5**4
    assert rep.violations == (1,)
    rep = fm.hypothesis1_check([F(7, 25)], 5)
    assert rep.passes == (14 * 49 < 3 * 625)


def qper_spec(**kw):
    base = dict(p=5, C=F(4), D_cap=25, filler_pool=POOL, n0=2, seed=7)
    base.update(kw)
    return fm.QPerSpec(**base)


def test_qper_certificate_all_pass():
    res = fm.gen_qper(qper_spec(), 80)
    assert len(res.sequence) == 80
    assert res.certificate["all_pass"]
    again = fm.certify_qper(res.sequence, res.runs, qper_spec())
    assert again == res.certificate


def _entry(cert, name):
    return next(e for e in cert["hypotheses"] if e["hypothesis"] == name)


def test_qper_flags_low_C():
    res = fm.gen_qper(qper_spec(C=F(2)), 60)
    assert not _entry(res.certificate, "C_threshold")["pass"]


def test_qper_flags_short_run():
    spec = qper_spec()
    res = fm.gen_qper(spec, 80)
    seq = list(res.sequence)
    r = res.runs[0]
    seq[r.n + 2] = F(2, 25)
    cert = fm.certify_qper(seq, res.runs, spec)
    e = _entry(cert, "runs_of_inverse_p")
    assert not e["pass"] and e["broken_at"] == [r.n + 3]


def test_qper_rejects_bad_pool():
    with pytest.raises(InfeasibleSpec):
        fm.gen_qper(qper_spec(filler_pool=(F(62, 25),)), 20)
    with pytest.raises(InfeasibleSpec):
        fm.gen_qper(qper_spec(filler_pool=(F(1, 125),)), 20)


def ooto_spec(**kw):
    base = dict(p=5, C=F(8), D_cap=25, filler_pool=POOL, block=(F(1, 5), F(-2, 25)), seed=1)
    base.update(kw)
    return fm.OotoSpec(**base)


def test_ooto_certificate_all_pass():
    res = fm.gen_ooto(ooto_spec(), 60)
    assert res.certificate["all_pass"]
    assert fm.certify_ooto(res.sequence, res.runs, ooto_spec()) == res.certificate


def test_ooto_unbounded_k():
    spec = ooto_spec(ks=(2, 5, 9), lambdas=(3, 3, 3), k_cap=4, C=F(0))
    res = fm.gen_ooto(spec, 80)
    assert not _entry(res.certificate, "k_bounded")["pass"]


def test_ooto_pinpoints_broken_repetition():
    spec = ooto_spec()
    res = fm.gen_ooto(spec, 60)
    r = res.runs[0]
    seq = list(res.sequence)
    h = r.n + 4
    seq[h + r.k - 1] = F(2, 25) if seq[h + r.k - 1] != F(2, 25) else F(1, 5)
    e = _entry(fm.certify_ooto(seq, res.runs, spec), "block_repetition")
    assert not e["pass"] and h in e["broken_at"]


def test_specs_from_json():
    q = fm.QPerSpec.from_json({"p": 5, "C": "4", "D_cap": 25, "filler_pool": ["1/5", "2/25"]})
    assert q.filler_pool == (F(1, 5), F(2, 25))
    o = fm.OotoSpec.from_json({"p": 5, "C": "8", "D_cap": 25, "filler_pool": ["1/5"], "block": ["1/5", "-2/25"]})
    assert o.k == 2


def test_beta_approximant_paper_prefix():
    prefix = [F(4, 25), F(-3, 125), F(1, 5), F(1, 5), F(2, 25)]
    rep = fm.beta_approximant(prefix, 3, 5)
    assert rep.beta == PeriodicCF(5, (0, F(4, 25), F(-3, 125)), (F(1, 5),)).value()
    assert rep.h == 9713125 and rep.h_bound == 5**10 and rep.height_holds
    assert rep.gap_holds and rep.gap_valuation == rep.predicted


def test_beta_approximant_length_one():
    rep = fm.beta_approximant([F(1, 25), F(2, 5)], 2, 5)
    assert rep.gap_holds and rep.gap_valuation == rep.predicted


def test_beta_approximant_random_valuations():
    rng = random.Random(4)
    for _ in range(20):
        res = fm.gen_qper(qper_spec(seed=rng.randrange(10**6)), 30)
        r = res.runs[0]
        alpha = res.sequence[: r.end] + [rng.choice([F(2, 25), F(-2, 25)])]
        rep = fm.beta_approximant(alpha, r.n, 5)
        assert rep.gap_valuation == rep.predicted
        assert rep.gap_holds


def test_inverse_p_tail():
    g = fm.inverse_p_tail(7)
    assert expand(g, 7, max_steps=5, detect_period=False).values == [F(1, 7)] * 5
    assert 7 * g * g - g - 7 == 0


def test_palindrome_matrix_examples():
    rep = fm.palindrome_analysis([F(1, 5), F(2, 25), F(1, 5)], 3, 5)
    assert rep.palindromic and rep.symmetric and rep.A_eq_Bprev
    rep = fm.palindrome_analysis([F(1, 5), F(2, 25), F(2, 5)], 3, 5)
    assert not rep.palindromic and not rep.symmetric


def test_matrix_entries_are_convergents():
    from padic_cf.cf_engine import convergents_of

    bs = [F(1, 5), F(-2, 25), F(2, 5), F(1, 125)]
    M = fm.quotient_matrix(bs)
    t = convergents_of([0] + bs, 5)
    assert M == ((t.B(4), t.B(3)), (t.A(4), t.A(3)))


def two_periodic_alpha():
    pcf = PeriodicCF(5, (0,), (F(1, 5), F(-2, 25)))
    return pcf, pcf.value()


def test_two_periodic_palindromes_and_bound():
    pcf, alpha = two_periodic_alpha()
    bs = pcf.quotients(30)[1:]
    for n in range(1, 28):
        rep = fm.palindrome_analysis(bs, n, 5, alpha)
        assert rep.palindromic == (n % 2 == 1)
        assert rep.consistent
        if rep.palindromic:
            assert rep.bound_holds


def test_subspace_witness_approaches_two():
    pcf, alpha = two_periodic_alpha()
    bs = pcf.quotients(60)[1:]
    deltas = [fm.subspace_witness(bs, n, 5, alpha).delta for n in (5, 21, 51)]
    assert all(d > F(15, 8) for d in deltas)
    assert abs(2 - deltas[-1]) < abs(2 - deltas[0]) or deltas[-1] == deltas[0]
    assert not fm.subspace_witness(bs, 4, 5, alpha).applicable


def test_subspace_size_conditions():
    pcf, alpha = two_periodic_alpha()
    w = fm.subspace_witness(pcf.quotients(40)[1:], 31, 5, alpha)
    assert w.size_z and w.size_x


def decimal_sturmian(num_a, num_b, D, R, N):
    """Oracle: floors of n*theta from 60-digit decimals."""
    getcontext().prec = 60
    theta = (Decimal(num_a) + Decimal(num_b) * Decimal(D).sqrt()) / Decimal(R)
    fl = [int((n * theta).to_integral_value(rounding="ROUND_FLOOR")) for n in range(1, N + 2)]
    return ["x" if fl[i + 1] - fl[i] == 0 else "y" for i in range(N)]


def test_sturmian_fibonacci_word():
    slope = fm.SturmianSlope(QuadSurd(3, -1, 2, D=5), "x", "y")
    assert "".join(fm.gen_sturmian(slope, 8)) == "xyxxyxyx"
    golden = fm.SturmianSlope(QuadSurd(-1, 1, 2, D=5), "x", "y")
    assert "".join(fm.gen_sturmian(golden, 8)) == "yxyyxyxy"


@pytest.mark.parametrize("P,Q,R,D", [(3, -1, 2, 5), (-1, 1, 2, 5), (0, 1, 10, 2), (5, -1, 7, 3)])
def test_sturmian_matches_decimal_oracle(P, Q, R, D):
    slope = fm.SturmianSlope(QuadSurd(P, Q, R, D=D), "x", "y")
    assert fm.gen_sturmian(slope, 500) == decimal_sturmian(P, Q, D, R, 500)


def test_sturmian_balanced_and_aperiodic():
    seq = fm.gen_sturmian(fm.SturmianSlope(QuadSurd(3, -1, 2, D=5), 0, 1), 10_000)
    for m in (2, 5, 13, 40):
        assert fm.is_balanced(seq, 1, m)
    for per in range(1, 200):
        assert any(seq[i] != seq[i + per] for i in range(5000, 9000))


def test_sturmian_small_slope_runs():
    seq = fm.gen_sturmian(fm.SturmianSlope(QuadSurd(0, 1, 100, D=2), "a", "b"), 200)
    assert seq[:69].count("b") == 0


def test_sturmian_rejects_rational():
    with pytest.raises(RationalSlope):
        fm.SturmianSlope(F(1, 3), "a", "b")


def test_thue_morse():
    assert fm.gen_thue_morse(("a", "b"), 4) == ["a", "b", "b", "a"]
    for n in range(1, 7):
        assert fm.is_palindrome(fm.gen_thue_morse((0, 1), 4**n))
    assert fm.is_cube_free(fm.gen_thue_morse((0, 1), 100))
    assert not fm.is_cube_free([0, 1, 0, 1, 0, 1])


def test_palindrome_symmetry_exhaustive_small():
    alphabet = [F(1, 5), F(2, 25), F(-2, 25)]
    for n in range(1, 7):
        for w in itertools.product(alphabet, repeat=n):
            M = fm.quotient_matrix(w)
            assert (M[0][1] == M[1][0]) == fm.is_palindrome(w)
