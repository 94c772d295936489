"""Balanced-digit p-adic expansions of rationals and quadratic surds.

Digits are taken in the balanced set {-(p-1)/2, ..., (p-1)/2}. Surds are
embedded in Q_p through a Hensel-lifted square root of the radicand and then
handled by plain integer arithmetic modulo p^M.
"""

from __future__ import annotations

import os
from functools import lru_cache
from dataclasses import dataclass, field
from fractions import Fraction

from sympy.ntheory.residue_ntheory import sqrt_mod

from .errors import NotResidue, PrecisionExhausted
from .exact_arith import INF, QuadSurd, centered_mod, check_prime, legendre, vp, vp_int

DEFAULT_PRECISION = 256


def default_precision() -> int:
    """Digit budget; ``PADIC_CF_PRECISION`` overrides the built-in 256."""
    env = os.environ.get("PADIC_CF_PRECISION")
    if env:
        value = int(env)
        if value < 8:
            raise ValueError("PADIC_CF_PRECISION must be >= 8")
        return value
    return DEFAULT_PRECISION


@dataclass(frozen=True)
class PAdicApprox:
    """Truncated expansion sum(digits[i] * p^(r+i)), known modulo p^(r+precision).

    The zero value (to the stated precision) has ``r = 0`` and no digits.
    """

    p: int
    r: int
    digits: tuple[int, ...] = field(default=())
    precision: int = 0

    def __post_init__(self):
        half = (self.p - 1) // 2
        if any(abs(d) > half for d in self.digits):
            raise ValueError("digit outside the balanced range")
        if self.digits and self.digits[0] == 0:
            raise ValueError("leading digit must be nonzero")

    @property
    def is_zero(self) -> bool:
        return not self.digits

    def value(self) -> Fraction:
        """The truncated sum as an exact rational."""
        return sum((Fraction(d) * Fraction(self.p) ** (self.r + i) for i, d in enumerate(self.digits)),
                   Fraction(0))

    def to_json(self) -> dict:
        return {"p": self.p, "r": self.r, "digits": list(self.digits), "precision": self.precision}

    @classmethod
    def from_json(cls, obj: dict) -> "PAdicApprox":
        digits = tuple(int(d) for d in obj["digits"])
        return cls(int(obj["p"]), int(obj["r"]), digits, int(obj.get("precision", len(digits))))


def balanced_digits(u: int, p: int, n: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        d = centered_mod(u, p)
        out.append(d)
        u = (u - d) // p
    return tuple(out)


def digits_of_rat(x, p: int, N: int) -> PAdicApprox:
    """First N balanced digits of a rational, starting at index v_p(x)."""
    check_prime(p)
    if N < 1:
        raise ValueError("precision N must be >= 1")
    x = Fraction(x)
    if x == 0:
        return PAdicApprox(p, 0, (), N)
    r = vp(x, p)
    unit = x / Fraction(p) ** r
    m = p**N
    u = unit.numerator * pow(unit.denominator, -1, m) % m
    return PAdicApprox(p, r, balanced_digits(u, p, N), N)


@lru_cache(maxsize=1024)
def hensel_sqrt(D: int, p: int, N: int, branch: str = "+") -> int:
    """s in [0, p^N) with s^2 = D mod p^N.

    The '+' branch is the lift whose residue mod p lies in {1, ..., (p-1)/2}.
    """
    check_prime(p)
    if N < 1:
        raise ValueError("precision N must be >= 1")
    if D % p == 0 or legendre(D, p) != 1:
        raise NotResidue(f"{D} is not a nonzero square modulo {p}")
    s = sqrt_mod(D % p, p)
    if (s <= (p - 1) // 2) != (branch == "+"):
        s = p - s
    k = 1
    while k < N:
        k = min(2 * k, N)
        m = p**k
        s = (s - (s * s - D) * pow(2 * s, -1, m)) % m
    return s % p**N


def _surd_numerator(x: QuadSurd, p: int) -> tuple[int, int, int, int]:
    """x = (A + B sqrt D) / (p^e * w) with integers A, B and p not dividing w."""
    L = x.R
    A, B = x.P, x.Q
    e = vp_int(L, p)
    return A, B, e, L // p**e


def _surd_unit_residue(x: QuadSurd, p: int, n_digits: int, budget: int | None) -> tuple[int, int]:
    """(v_p(x), unit mod p^n_digits) for a surd, refining the Hensel lift as needed."""
    if x.p is not None and x.p != p:
        raise ValueError(f"surd is embedded at p={x.p}, not {p}")
    budget = default_precision() if budget is None else budget
    A, B, e, w = _surd_numerator(x, p)
    M = min(max(16, 2 * n_digits), budget)
    while True:
        mod = p**M
        s = hensel_sqrt(x.D, p, M, x.branch)
        n = (A + B * s) % mod
        if n != 0:
            v = vp_int(n, p)
            if M - v >= n_digits:
                m = p**n_digits
                unit = (n // p**v) * pow(w, -1, m) % m
                return v - e, unit
        if M >= budget:
            raise PrecisionExhausted(
                f"valuation of {x} not resolved within {budget} digits")
        M = min(2 * M, budget)


def surd_valuation(x: QuadSurd, p: int | None = None, budget: int | None = None) -> int:
    p = x.p if p is None else p
    if p is None:
        raise ValueError("surd has no p-adic embedding")
    return _surd_unit_residue(x, p, 1, budget)[0]


def digits_of_surd(x, N: int, p: int | None = None, budget: int | None = None) -> PAdicApprox:
    """First N balanced digits of a quadratic surd under its chosen embedding.

    Rational inputs fall through to :func:`digits_of_rat`.
    """
    if not isinstance(x, QuadSurd):
        if p is None:
            raise ValueError("p is required for rational input")
        return digits_of_rat(x, p, N)
    p = x.p if p is None else p
    if p is None:
        raise ValueError("surd has no p-adic embedding")
    if N < 1:
        raise ValueError("precision N must be >= 1")
    r, unit = _surd_unit_residue(x, p, N, budget)
    return PAdicApprox(p, r, balanced_digits(unit, p, N), N)


def digits_of(x, p: int, N: int, budget: int | None = None) -> PAdicApprox:
    if isinstance(x, QuadSurd):
        return digits_of_surd(x, N, p, budget)
    return digits_of_rat(x, p, N)


def unit_residue(x, p: int, n_digits: int, budget: int | None = None) -> tuple[float | int, int]:
    """(v_p(x), u mod p^n_digits) where x = p^v * u; ``(inf, 0)`` for zero."""
    if isinstance(x, QuadSurd):
        return _surd_unit_residue(x, p, n_digits, budget)
    x = Fraction(x)
    if x == 0:
        return INF, 0
    r = vp(x, p)
    unit = x / Fraction(p) ** r
    m = p**n_digits
    return r, unit.numerator * pow(unit.denominator, -1, m) % m
