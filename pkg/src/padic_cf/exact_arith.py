"""Exact arithmetic over Q, Z[1/p] and quadratic fields Q(sqrt D), plus p-adic valuation.

Rationals are plain :class:`fractions.Fraction` values (aliased as ``Rat``).
Valuations are ``int`` for nonzero inputs and ``math.inf`` for zero.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DivisionByZero, MixedField, NotResidue

Rat = Fraction
Number = Union[int, Fraction, "QuadSurd"]

INF = math.inf


def is_odd_prime(p: int) -> bool:
    if not isinstance(p, int) or p < 3 or p % 2 == 0:
        return False
    return all(p % d for d in range(3, math.isqrt(p) + 1, 2))


def check_prime(p: int) -> int:
    if not is_odd_prime(p):
        raise ValueError(f"p must be an odd prime, got {p!r}")
    return p


def vp_int(n: int, p: int) -> float | int:
    if n == 0:
        return INF
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp(x, p: int):
    """p-adic valuation of a rational or a quadratic surd (``inf`` for zero)."""
    if isinstance(x, QuadSurd):
        from .padic_digits import surd_valuation

        return surd_valuation(x, p)
    x = Fraction(x)
    if x == 0:
        return INF
    return vp_int(x.numerator, p) - vp_int(x.denominator, p)


def abs_p(x, p: int) -> Fraction:
    """|x|_p = p^(-v_p(x)) as an exact rational."""
    v = vp(x, p)
    if v == INF:
        return Fraction(0)
    return Fraction(p) ** (-v)


def split_p(x: Fraction, p: int) -> tuple[int, Fraction]:
    """Write x = p^v * u with u a p-adic unit; returns (v, u)."""
    x = Fraction(x)
    if x == 0:
        raise DivisionByZero("zero has no unit part")
    v = vp(x, p)
    return v, x / Fraction(p) ** v


def is_s_integer(x, p: int) -> bool:
    """True when x lies in Z[1/p] (denominator a power of p)."""
    d = Fraction(x).denominator
    while d % p == 0:
        d //= p
    return d == 1


def centered_mod(n: int, m: int) -> int:
    """Representative of n mod m in [-(m-1)/2, (m-1)/2] (m odd)."""
    r = n % m
    return r - m if r > m // 2 else r


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def split_square(n: int, trial_bound: int = 10_000) -> tuple[int, int]:
    """Best-effort n = s^2 * d with d free of squares of primes below ``trial_bound``.

    Full square-free reduction would need factoring; removing small square
    factors is enough to keep radicands short, and equality of surds is decided
    within one fixed radicand regardless.
    """
    if n == 0:
        return 0, 0
    sign = -1 if n < 0 else 1
    n = abs(n)
    s = 1
    r = math.isqrt(n)
    if r * r == n:
        return r, sign
    q = 2
    while q < trial_bound and q * q <= n:
        while n % (q * q) == 0:
            n //= q * q
            s *= q
        q += 1 if q == 2 else 2
    r = math.isqrt(n)
    if r * r == n:
        return s * r, sign
    return s, sign * n


# --------------------------------------------------------------------------
# Partial quotients


@dataclass(frozen=True)
class PAdicUnitFrac:
    """An element u/p^a of Z[1/p] with p not dividing u (the zero element is u=0, a=0)."""

    p: int
    u: int
    a: int = 0

    def __post_init__(self):
        if self.a < 0:
            raise ValueError("exponent a must be nonnegative")
        if self.u == 0 and self.a != 0:
            raise ValueError("zero must be stored with a = 0")
        if self.u != 0 and self.u % self.p == 0:
            raise ValueError(f"numerator {self.u} is divisible by p={self.p}")

    @classmethod
    def of(cls, x, p: int) -> "PAdicUnitFrac":
        x = Fraction(x)
        if x == 0:
            return cls(p, 0, 0)
        if not is_s_integer(x, p):
            raise ValueError(f"{x} is not in Z[1/{p}]")
        v = vp(x, p)
        if v > 0:
            raise ValueError(f"{x} has positive valuation; not of the form u/p^a with p not dividing u")
        return cls(p, x.numerator, -v)

    @property
    def value(self) -> Fraction:
        return Fraction(self.u, self.p**self.a)

    @property
    def valuation(self):
        return INF if self.u == 0 else -self.a

    def __float__(self) -> float:
        return self.u / self.p**self.a

    def __str__(self) -> str:
        if self.a == 0:
            return str(self.u)
        if self.a == 1:
            return f"{self.u}/{self.p}"
        return f"{self.u}/{self.p}^{self.a}"

    def to_json(self) -> dict:
        return {"u": str(self.u), "a": self.a}

    @classmethod
    def from_json(cls, obj, p: int) -> "PAdicUnitFrac":
        if isinstance(obj, dict):
            return cls(p, int(obj["u"]), int(obj.get("a", 0)))
        return cls.of(parse_rat(str(obj)), p)


def as_rat(x) -> Fraction:
    if isinstance(x, PAdicUnitFrac):
        return x.value
    return Fraction(x)


# --------------------------------------------------------------------------
# Quadratic surds


class QuadSurd:
    """Exact element a + b*sqrt(D) of Q(sqrt D) with a fixed p-adic square root branch.

    Stored internally as rational coordinates (a, b), which is already a
    canonical form for a fixed radicand D. ``P, Q, R`` expose the integer
    presentation (P + Q sqrt D)/R with R > 0 and gcd(P, Q, R) = 1.

    ``p`` may be ``None`` for a purely real use (e.g. Sturmian slopes); such
    values have no p-adic embedding.
    """

    __slots__ = ("_a", "_b", "D", "p", "branch")

    def __init__(self, P, Q, R=1, *, D: int, p: int | None = None, branch: str = "+"):
        R = Fraction(R)
        if R == 0:
            raise DivisionByZero("R must be nonzero")
        a = Fraction(P) / R
        b = Fraction(Q) / R
        if b == 0:
            raise ValueError("Q = 0: represent the value as a rational instead")
        self._init(a, b, D, p, branch)

    def _init(self, a, b, D, p, branch):
        if branch not in ("+", "-"):
            raise ValueError("branch must be '+' or '-'")
        if not isinstance(D, int) or D in (0, 1) or is_square(D):
            raise ValueError(f"radicand D={D!r} must be a non-square integer")
        if p is not None:
            check_prime(p)
            if D % p == 0 or legendre(D, p) != 1:
                raise NotResidue(f"{D} is not a nonzero square modulo {p}")
        object.__setattr__(self, "_a", a)
        object.__setattr__(self, "_b", b)
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "branch", branch)

    def __setattr__(self, name, value):
        raise AttributeError("QuadSurd is immutable")

    @classmethod
    def from_coords(cls, a, b, D, p=None, branch="+"):
        """Build from rational coordinates; returns a Fraction when b == 0."""
        a, b = Fraction(a), Fraction(b)
        if b == 0:
            return a
        obj = object.__new__(cls)
        obj._init(a, b, D, p, branch)
        return obj

    # -- coordinates ------------------------------------------------------
    @property
    def a(self) -> Fraction:
        return self._a

    @property
    def b(self) -> Fraction:
        return self._b

    @property
    def R(self) -> int:
        r = math.lcm(self._a.denominator, self._b.denominator)
        return r // math.gcd(self._a.numerator * r // self._a.denominator,
                             self._b.numerator * r // self._b.denominator, r)

    @property
    def P(self) -> int:
        return int(self._a * self.R)

    @property
    def Q(self) -> int:
        return int(self._b * self.R)

    def key(self) -> tuple:
        return ("S", self._a, self._b, self.D, self.p, self.branch)

    def field(self) -> tuple:
        return (self.D, self.p, self.branch)

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, QuadSurd):
            if other.field() != self.field():
                raise MixedField(f"cannot combine Q(sqrt {self.D}) [{self.p},{self.branch}] "
                                 f"with Q(sqrt {other.D}) [{other.p},{other.branch}]")
            return other._a, other._b
        if isinstance(other, PAdicUnitFrac):
            return other.value, Fraction(0)
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0)
        return None

    def _make(self, a, b):
        return QuadSurd.from_coords(a, b, self.D, self.p, self.branch)

    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return self._make(self._a + c[0], self._b + c[1])

    __radd__ = __add__

    def __neg__(self):
        return self._make(-self._a, -self._b)

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return self._make(self._a - c[0], self._b - c[1])

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return self._make(c[0] - self._a, c[1] - self._b)

    def __mul__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        x, y = c
        return self._make(self._a * x + self.D * self._b * y, self._a * y + self._b * x)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self._a * self._a - self.D * self._b * self._b

    def conjugate(self) -> "QuadSurd":
        return self._make(self._a, -self._b)

    def inverse(self):
        n = self.norm()  # nonzero: D is not a square
        return self._make(self._a / n, -self._b / n)

    def __truediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        if c[1] == 0:
            if c[0] == 0:
                raise DivisionByZero("division by zero")
            return self._make(self._a / c[0], self._b / c[0])
        return self * self._make(*c).inverse()

    def __rtruediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return self.inverse() * c[0] if c[1] == 0 else self._make(*c) / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = Fraction(1)
        base = self
        while n:
            if n & 1:
                out = base * out
            base = base * base
            n >>= 1
        return out

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, QuadSurd):
            return self.key() == other.key()
        if isinstance(other, (int, Fraction)):
            return False  # b != 0 so the value is irrational
        return NotImplemented

    def __hash__(self):
        return hash(self.key())

    def __bool__(self):
        return True

    # -- real embedding ---------------------------------------------------
    def __float__(self) -> float:
        if self.D < 0:
            raise TypeError("imaginary quadratic surd has no real value")
        return float(self._a) + float(self._b) * math.sqrt(self.D)

    def to_complex(self) -> complex:
        return complex(float(self._a)) + complex(float(self._b)) * complex(self.D) ** 0.5

    # -- formatting -------------------------------------------------------
    def __str__(self) -> str:
        return format_surd(self)

    def __repr__(self) -> str:
        return f"QuadSurd({self.P}, {self.Q}, {self.R}, D={self.D}, p={self.p}, branch={self.branch!r})"


def canonical_form(x):
    """Canonical (P, Q, R, D) presentation of a surd, or (num, den) of a rational."""
    if isinstance(x, QuadSurd):
        return (x.P, x.Q, x.R, x.D)
    x = Fraction(x)
    return (x.numerator, x.denominator)


def value_key(x) -> tuple:
    """Hashable exact key for a rational or surd value."""
    if isinstance(x, QuadSurd):
        return x.key()
    x = Fraction(x)
    return ("Q", x.numerator, x.denominator)


# --------------------------------------------------------------------------
# Parsing / printing

_RAT_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")
_SURD_RE = re.compile(
    r"^\s*\(\s*(?P<P>[+-]?\d+(?:/\d+)?)\s*(?P<sign>[+-])\s*(?P<Q>\d+(?:/\d+)?)\s*\*\s*sqrt\(\s*(?P<D>[+-]?\d+)\s*\)\s*\)"
    r"\s*(?:/\s*(?P<R>\d+(?:/\d+)?))?\s*$"
)


def parse_rat(s: str) -> Fraction:
    m = _RAT_RE.match(s)
    if not m:
        raise ValueError(f"cannot parse rational {s!r}; expected 'num/den'")
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise DivisionByZero("zero denominator")
    return Fraction(int(m.group(1)), den)


def format_rat(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_surd(s: str, p: int | None = None, branch: str = "+") -> QuadSurd:
    m = _SURD_RE.match(s)
    if not m:
        raise ValueError(f"cannot parse surd {s!r}; expected '(P + Q*sqrt(D))/R'")
    P = parse_rat(m["P"])
    Q = parse_rat(m["Q"]) * (-1 if m["sign"] == "-" else 1)
    R = parse_rat(m["R"]) if m["R"] else Fraction(1)
    return QuadSurd(P, Q, R, D=int(m["D"]), p=p, branch=branch)


def format_surd(x: QuadSurd) -> str:
    P, Q, R = x.P, x.Q, x.R
    sign = "-" if Q < 0 else "+"
    return f"({P} {sign} {abs(Q)}*sqrt({x.D}))/{R}"


def parse_value(s: str, p: int | None = None, branch: str = "+"):
    """Parse 'num/den' or '(P + Q*sqrt(D))/R'."""
    if "sqrt" in s:
        return parse_surd(s, p, branch)
    return parse_rat(s)


def format_value(x) -> str:
    if isinstance(x, QuadSurd):
        return format_surd(x)
    return format_rat(as_rat(x))
