"""Periodic continued fractions to quadratic relations, naive and Weil heights,
and audits of the height bounds for periodic Browkin expansions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import chain, islice
from typing import Sequence

import mpmath

from .cf_engine import convergents_of, expand
from .errors import (
    DegenerateRelation,
    HypothesisViolated,
    NotResidue,
    ReduciblePolynomial,
    ReportsViolation,
    SizeLimit,
    ZeroPolynomial,
)
from .exact_arith import QuadSurd, abs_p, as_rat, is_s_integer, is_square, legendre, split_square, vp, vp_int


def fibonacci(n: int) -> int:
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def is_browkin_quotient(b, p: int, leading: bool = False) -> bool:
    """Whether b is a possible Browkin partial quotient (b_0 if ``leading``)."""
    b = as_rat(b)
    if b == 0:
        return leading
    if not is_s_integer(b, p) or not abs(b) < Fraction(p, 2):
        return False
    return vp(b, p) <= 0 if leading else vp(b, p) < 0


@dataclass(frozen=True)
class PeriodicCF:
    """[b_0, ..., b_k, overline(b_{k+1}, ..., b_{k+t+1})]; ``preperiod`` may be empty."""

    p: int
    preperiod: tuple[Fraction, ...]
    period: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "preperiod", tuple(as_rat(b) for b in self.preperiod))
        object.__setattr__(self, "period", tuple(as_rat(b) for b in self.period))
        if not self.period:
            raise ValueError("period must be nonempty")
        for i, b in enumerate(self.preperiod + self.period):
            if not is_browkin_quotient(b, self.p, leading=(i == 0)):
                raise ValueError(f"b_{i} = {b} is not a Browkin partial quotient at p={self.p}")

    @property
    def k(self) -> int:
        return len(self.preperiod) - 1

    @property
    def t(self) -> int:
        return len(self.period) - 1

    @property
    def lemma_shape(self) -> bool:
        """b_0 = 0 and k >= 1, the shape the height lemma is stated for."""
        return self.k >= 1 and self.preperiod[0] == 0

    def quotients(self, n: int) -> list[Fraction]:
        stream = chain(self.preperiod, _cycle(self.period))
        return list(islice(stream, n))

    def to_json(self) -> dict:
        return {"schema": 1, "p": self.p,
                "preperiod": [_fmt(b) for b in self.preperiod],
                "period": [_fmt(b) for b in self.period]}

    @classmethod
    def from_json(cls, obj: dict) -> "PeriodicCF":
        from .exact_arith import PAdicUnitFrac

        p = int(obj["p"])
        conv = lambda xs: tuple(PAdicUnitFrac.from_json(x, p).value for x in xs)  # noqa: E731
        return cls(p, conv(obj.get("preperiod", [])), conv(obj["period"]))

    def value(self):
        """The exact value: the root of its quadratic relation whose expansion matches."""
        return solve_periodic(self)


def _cycle(xs):
    while True:
        yield from xs


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# --------------------------------------------------------------------------
# Relation


@dataclass(frozen=True)
class QuadraticRelation:
    """C0 x^2 + C1 x + C2 = 0 together with its integer forms.

    ``scaled`` is p^clearing_exponent * (C0, C1, C2) (only for the lemma shape);
    ``cleared`` is the primitive integer vector with positive leading coefficient.
    """

    p: int
    C: tuple[Fraction, Fraction, Fraction]
    summands: tuple[tuple[Fraction, ...], ...]
    cleared: tuple[int, int, int]
    clearing_exponent: int | None = None
    scaled: tuple[int, int, int] | None = None
    residual_valuation: int | None = None
    precision: int = 64

    def polynomial_str(self) -> str:
        return poly_str(self.cleared)

    def to_json(self) -> dict:
        return {
            "C": [str(c) for c in self.C],
            "cleared": [str(c) for c in self.cleared],
            "clearing_exponent": self.clearing_exponent,
            "scaled": None if self.scaled is None else [str(c) for c in self.scaled],
            "residual_valuation": self.residual_valuation,
            "precision": self.precision,
            "polynomial": self.polynomial_str(),
        }


def poly_str(c: Sequence[int]) -> str:
    parts = []
    for coef, mono in zip(c, ("x^2", "x", "")):
        if coef == 0:
            continue
        sign = "-" if coef < 0 else "+"
        parts.append(f"{sign} {abs(coef)}{(' ' if mono else '')}{mono}".rstrip())
    if not parts:
        return "0"
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else "-" + s[2:]


def primitive(coeffs: Sequence) -> tuple[int, ...]:
    """Primitive integer multiple of a rational vector, sign-normalized on the first nonzero entry."""
    fr = [as_rat(c) for c in coeffs]
    if all(c == 0 for c in fr):
        raise ZeroPolynomial("all coefficients vanish")
    L = math.lcm(*(c.denominator for c in fr))
    ints = [int(c * L) for c in fr]
    g = math.gcd(*ints)
    ints = [c // g for c in ints]
    lead = next(c for c in ints if c != 0)
    if lead < 0:
        ints = [-c for c in ints]
    return tuple(ints)


def periodic_to_relation(cf: PeriodicCF, precision: int = 64) -> QuadraticRelation:
    """Quadratic relation satisfied by a periodic expansion, via the period's fixed-point
    equation folded through the preperiod convergents."""
    p = cf.p
    pre = convergents_of(cf.preperiod, p)
    Ak, Ak1 = pre.A(pre.last), pre.A(pre.last - 1)
    Bk, Bk1 = pre.B(pre.last), pre.B(pre.last - 1)
    per = convergents_of(cf.period, p)
    At, At1 = per.A(per.last), per.A(per.last - 1)
    Bt, Bt1 = per.B(per.last), per.B(per.last - 1)

    s0 = (-At1 * Bk * Bk, At * Bk * Bk1, -Bt1 * Bk * Bk1, Bt * Bk1 * Bk1)
    s1 = (2 * At1 * Ak * Bk, -At * Ak1 * Bk, Bt1 * Ak1 * Bk, -At * Ak * Bk1, Bt1 * Ak * Bk1,
          -2 * Bt * Ak1 * Bk1)
    s2 = (-At1 * Ak * Ak, At * Ak * Ak1, -Bt1 * Ak * Ak1, Bt * Ak1 * Ak1)
    C = (sum(s0), sum(s1), sum(s2))
    if all(c == 0 for c in C):
        raise DegenerateRelation("all relation coefficients vanish")

    exponent = scaled = None
    if cf.lemma_shape:
        # |A~_t|_p = p^(e~_t), |B_k|_p = p^(f_k)
        et, fk = -vp(At, p), -vp(Bk, p)
        exponent = et + 2 * fk - 1
        sc = [c * Fraction(p) ** exponent for c in C]
        if all(c.denominator == 1 for c in sc):
            scaled = tuple(int(c) for c in sc)

    cleared = primitive(C)
    residual = relation_residual(cleared, cf, precision)
    return QuadraticRelation(p, C, (s0, s1, s2), cleared, exponent, scaled, residual, precision)


def relation_residual(coeffs: Sequence[int], cf: PeriodicCF, precision: int = 64) -> int:
    """min(precision, v_p(c0 x^2 + c1 x + c2)) at a convergent x = A_N/B_N of the expansion
    accurate beyond ``precision`` digits (accuracy from v_p(alpha - A_N/B_N) = -v_p(B_N B_{N+1}))."""
    p = cf.p
    lead = cf.preperiod[0] if cf.preperiod else cf.period[0]
    slack = 2 * max(0, -vp(lead, p)) + 2 if lead != 0 else 2
    n = len(cf.preperiod) + len(cf.period) + 2
    while True:
        table = convergents_of(cf.quotients(n + 1), p)
        accuracy = -(table.f(n - 1) + table.f(n))
        if accuracy >= precision + slack:
            break
        n *= 2
    x = table.convergent(n - 1)
    c0, c1, c2 = coeffs
    r = c0 * x * x + c1 * x + c2
    return precision if r == 0 else min(precision, vp(r, p))


def quadratic_roots(coeffs: Sequence[int], p: int, branch: str = "+"):
    """Both roots of c0 x^2 + c1 x + c2 in Q_p (as rationals or embedded surds)."""
    c0, c1, c2 = coeffs
    if c0 == 0:
        if c1 == 0:
            raise ZeroPolynomial("constant polynomial")
        return [Fraction(-c2, c1)]
    disc = c1 * c1 - 4 * c0 * c2
    if disc == 0:
        return [Fraction(-c1, 2 * c0)]
    m = vp_int(disc, p)
    if m % 2:
        raise NotResidue("discriminant has odd p-adic valuation; roots are not in Q_p")
    unit = disc // p**m
    s, d = split_square(unit)
    scale = Fraction(p ** (m // 2) * s, 2 * c0)
    if d in (1,) and is_square(unit):
        r = math.isqrt(unit) * p ** (m // 2)
        return [Fraction(-c1 + r, 2 * c0), Fraction(-c1 - r, 2 * c0)]
    if legendre(d, p) != 1:
        raise NotResidue("discriminant is not a square in Q_p")
    a = Fraction(-c1, 2 * c0)
    return [QuadSurd.from_coords(a, scale, d, p, branch), QuadSurd.from_coords(a, -scale, d, p, branch)]


def solve_periodic(cf: PeriodicCF, rel: QuadraticRelation | None = None):
    """Root of the relation whose Browkin re-expansion reproduces the input
    for at least k + 2(t+1) + 1 partial quotients."""
    rel = rel or periodic_to_relation(cf)
    need = len(cf.preperiod) + 2 * len(cf.period) + 1
    target = cf.quotients(need)
    for root in quadratic_roots(rel.cleared, cf.p):
        ex = expand(root, cf.p, max_steps=need, detect_period=False)
        if ex.values[:need] == target:
            return root
    raise DegenerateRelation("neither root re-expands to the given periodic fraction")


# --------------------------------------------------------------------------
# Heights


def naive_height(obj) -> Fraction:
    """max |c_i| / gcd(c_i) for an integer polynomial, or max(|a|, |b|) for a rational a/b."""
    if isinstance(obj, QuadraticRelation):
        obj = obj.cleared
    if isinstance(obj, (int, Fraction)):
        x = Fraction(obj)
        return Fraction(max(abs(x.numerator), x.denominator))
    ints = [int(c) for c in obj]
    if all(c == 0 for c in ints):
        raise ZeroPolynomial("zero polynomial has no height")
    return Fraction(max(abs(c) for c in ints), math.gcd(*ints))


def is_irreducible_quadratic(coeffs: Sequence[int]) -> bool:
    c0, c1, c2 = coeffs
    if c0 == 0:
        return False
    disc = c1 * c1 - 4 * c0 * c2
    return not is_square(disc)


def weil_height_deg2(obj, tol: float = 1e-12) -> tuple[float, float]:
    """H = M(f)^(1/2) for an irreducible quadratic f, with an absolute error bound.

    Roots are computed with the cancellation-free quadratic formula at 50
    significant digits, far below ``tol``; the returned bound is tol * H.
    """
    coeffs = obj.cleared if isinstance(obj, QuadraticRelation) else tuple(int(c) for c in obj)
    if not is_irreducible_quadratic(coeffs):
        raise ReduciblePolynomial(f"{poly_str(coeffs)} is not an irreducible quadratic")
    c0, c1, c2 = primitive(coeffs)
    with mpmath.workdps(50):
        disc = mpmath.mpf(c1 * c1 - 4 * c0 * c2)
        if disc < 0:
            mod2 = mpmath.mpf(c2) / c0  # |root|^2 for both conjugate roots
            mahler = abs(c0) * max(1, mod2)
        else:
            sq = mpmath.sqrt(disc)
            q = -(c1 + (sq if c1 >= 0 else -sq)) / 2
            r1, r2 = q / c0, mpmath.mpf(c2) / q
            mahler = abs(c0) * max(1, abs(r1)) * max(1, abs(r2))
        H = float(mpmath.sqrt(mahler))
    return H, tol * H


@dataclass
class HeightReport:
    naive_h: Fraction
    weil_H: float
    degree: int
    bound_value: Fraction
    bound_holds: bool
    weil_err: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def margin(self) -> Fraction:
        return self.bound_value - self.naive_h

    def to_json(self) -> dict:
        out = {
            "schema": 1,
            "naive_h": str(self.naive_h),
            "weil_H": self.weil_H,
            "weil_err": self.weil_err,
            "degree": self.degree,
            "bound": str(self.bound_value),
            "margin": str(self.margin),
            "bound_holds": self.bound_holds,
        }
        out.update({k: (str(v) if isinstance(v, (Fraction, int)) and not isinstance(v, bool) else v)
                    for k, v in self.details.items()})
        return out


def _heights_of(coeffs: Sequence[int], alpha) -> tuple[Fraction, float, float, int, bool]:
    """(h, H, err, degree, irreducible) using the minimal polynomial when reducible."""
    if is_irreducible_quadratic(coeffs):
        h = naive_height(coeffs)
        H, err = weil_height_deg2(coeffs)
        return h, H, err, 2, True
    x = as_rat(alpha)
    h = naive_height(x)
    return h, float(h), 0.0, 1, False


def check_h1_bound(cf: PeriodicCF) -> HeightReport:
    """Audit h(alpha) <= (8/p^2) |B_{k+t+1}|_p^2 |B_k|_p^2 for alpha = [0, b_1..b_k, overline(...)]."""
    if not cf.lemma_shape:
        raise HypothesisViolated("height lemma needs b_0 = 0 and k >= 1")
    p = cf.p
    rel = periodic_to_relation(cf)
    k, t = cf.k, cf.t
    table = convergents_of(cf.quotients(k + t + 2), p)
    Bk_p = abs_p(table.B(k), p)
    Bkt_p = abs_p(table.B(k + t + 1), p)
    bound = Fraction(8, p * p) * Bkt_p**2 * Bk_p**2
    alpha = solve_periodic(cf, rel)
    h, H, err, degree, irreducible = _heights_of(rel.cleared, alpha)
    h_relation = naive_height(rel.cleared)
    return HeightReport(
        naive_h=h, weil_H=H, degree=degree, bound_value=bound, bound_holds=h <= bound, weil_err=err,
        details={
            "check": "h1",
            "polynomial": rel.polynomial_str(),
            "h_relation": h_relation,
            "irreducible": irreducible,
            "B_k_p": Bk_p,
            "B_k_t_1_p": Bkt_p,
            "clearing_exponent": rel.clearing_exponent,
            "residual_valuation": rel.residual_valuation,
        },
    )


def _hat_sequences(prefix: Sequence[Fraction], p: int) -> tuple[list[int], list[int], list[int]]:
    """Integer numerators A^_i, B^_i (i = 0..k) and exponents a_i for b_i = b^_i / p^(a_i)."""
    a = [0] + [-vp(b, p) for b in prefix]
    bh = [0] + [as_rat(b).numerator for b in prefix]
    Ah, Bh = [0, 1], [1, bh[1]]
    for i in range(2, len(prefix) + 1):
        shift = p ** (a[i - 1] + a[i])
        Ah.append(bh[i] * Ah[i - 1] + shift * Ah[i - 2])
        Bh.append(bh[i] * Bh[i - 1] + shift * Bh[i - 2])
    return Ah, Bh, a


def h2_polynomial(prefix: Sequence, p: int) -> tuple[int, int, int]:
    """Integer quadratic for [0, b_1..b_k, overline(1/p)] in terms of A^_k, B^_k."""
    prefix = [as_rat(b) for b in prefix]
    k = len(prefix)
    Ah, Bh, a = _hat_sequences(prefix, p)
    A, A1, B, B1 = Ah[k], Ah[k - 1], Bh[k], Bh[k - 1]
    a1, ak = a[1], a[k]
    c0 = B * B1 * p ** (ak - 1) - B * B + B1 * B1 * p ** (2 * ak)
    c1 = (2 * A * B * p**a1 - 2 * A1 * B1 * p ** (a1 + 2 * ak)
          - A * B1 * p ** (a1 + ak - 1) - A1 * B * p ** (a1 + ak - 1))
    c2 = A * A1 * p ** (2 * a1 + ak - 1) - A * A * p ** (2 * a1) + A1 * A1 * p ** (2 * a1 + 2 * ak)
    return c0, c1, c2


def check_h2_bound(prefix: Sequence, p: int) -> HeightReport:
    """Audit h(alpha) <= |B_k|_p^2 for alpha = [0, b_1..b_k, overline(1/p)], together with
    the intermediate size claims |B_k|_inf^2, |A_k|_inf^2 < p/(4p+2)."""
    from .families import hypothesis1_check

    prefix = [as_rat(b) for b in prefix]
    hyp = hypothesis1_check(prefix, p)
    if not hyp.passes:
        raise HypothesisViolated(f"prefix fails Hypothesis 1 at indices {hyp.violations}")
    k = len(prefix)
    cf = PeriodicCF(p, (Fraction(0),) + tuple(prefix), (Fraction(1, p),))
    coeffs = h2_polynomial(prefix, p)
    table = convergents_of([0] + prefix, p)
    Ak, Bk = table.A(k), table.B(k)
    bound = abs_p(Bk, p) ** 2
    alpha = solve_periodic(cf)
    h, H, err, degree, irreducible = _heights_of(coeffs, alpha)
    limit = Fraction(p, 4 * p + 2)
    return HeightReport(
        naive_h=h, weil_H=H, degree=degree, bound_value=bound, bound_holds=h <= bound, weil_err=err,
        details={
            "check": "h2",
            "polynomial": poly_str(primitive(coeffs)),
            "irreducible": irreducible,
            "B_k_p": abs_p(Bk, p),
            "B_k_inf_sq": float(Bk * Bk),
            "A_k_inf_sq": float(Ak * Ak),
            "size_limit": limit,
            "B_k_inf_sq_below": Bk * Bk < limit,
            "A_k_inf_sq_below": Ak * Ak < limit,
            "hypothesis1_bound_sq": hyp.bound_sq,
        },
    )


@dataclass(frozen=True)
class RemarkReport:
    """H <= sqrt(D+1) h and h <= 2^D H as stated, plus the same pair with the
    unnormalized height H^D = M(f) in place of H."""

    degree: int
    h: Fraction
    H: float
    err: float
    upper_ok: bool
    lower_ok: bool
    upper_scaled_ok: bool
    lower_scaled_ok: bool

    @property
    def ok(self) -> bool:
        return self.upper_ok and self.lower_ok

    def to_json(self) -> dict:
        return {"degree": self.degree, "h": str(self.h), "H": self.H, "err": self.err,
                "upper_ok": self.upper_ok, "lower_ok": self.lower_ok,
                "upper_scaled_ok": self.upper_scaled_ok, "lower_scaled_ok": self.lower_scaled_ok,
                "ok": self.ok}


def check_remark_H(obj) -> RemarkReport:
    """Compare h and H within the Weil-height error bound."""
    if isinstance(obj, (int, Fraction)):
        h = naive_height(obj)
        D, H, err = 1, float(h), 0.0
    else:
        coeffs = obj.cleared if isinstance(obj, QuadraticRelation) else tuple(int(c) for c in obj)
        if coeffs[0] == 0 or not is_irreducible_quadratic(coeffs):
            raise ReduciblePolynomial("pass the rational root itself for degree 1")
        h = naive_height(coeffs)
        H, err = weil_height_deg2(coeffs)
        D = 2
    hf = float(h)
    root = math.sqrt(D + 1)
    MD_hi, MD_lo = (H + err) ** D, (H - err) ** D
    return RemarkReport(D, h, H, err,
                        upper_ok=H - err <= root * hf,
                        lower_ok=hf <= 2**D * (H + err),
                        upper_scaled_ok=MD_lo <= root * hf,
                        lower_scaled_ok=hf <= 2**D * MD_hi)


def fibonacci_term_count(prefix) -> int:
    """Number of monomials b^_{i1}..b^_{ih} p^{a_j1}..p^{a_jl} in the expansion of B^_k.

    Uses B^_i = b^_i B^_{i-1} + p^{a_{i-1}} p^{a_i} B^_{i-2}; each monomial is the
    pair (indices carrying b^, indices carrying p^a), so no terms can merge.
    """
    k = prefix if isinstance(prefix, int) else len(prefix)
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > 12:
        raise SizeLimit("symbolic expansion limited to k <= 12")
    prev2 = {(frozenset(), frozenset())}
    prev1 = {(frozenset({1}), frozenset())}
    for i in range(2, k + 1):
        cur = {(b | {i}, q) for b, q in prev1} | {(b, q | {i - 1, i}) for b, q in prev2}
        prev2, prev1 = prev1, cur
    count = len(prev1)
    if count != fibonacci(k + 1):
        raise ReportsViolation(f"B^_{k} has {count} monomials, expected F_{k + 1} = {fibonacci(k + 1)}")
    return count
