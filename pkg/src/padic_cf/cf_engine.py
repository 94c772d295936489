"""Continued fraction iteration, the p-adic Euclidean algorithm, convergent tables and
the valuation / growth laws that Browkin expansions satisfy."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DivisionByZero, PrecisionExhausted
from .exact_arith import (
    INF,
    PAdicUnitFrac,
    QuadSurd,
    abs_p,
    as_rat,
    check_prime,
    format_value,
    value_key,
    vp,
)
from .floors import FloorKind, floor
from .padic_digits import default_precision

FINITE = "Finite"
TRUNCATED = "TruncatedAtMaxSteps"
PERIODIC = "PeriodDetected"

DEFAULT_MAX_STEPS = 10_000


@dataclass(frozen=True)
class CFExpansion:
    """Partial quotients [b0; b1, b2, ...] plus how the iteration stopped.

    For ``PeriodDetected`` the stored quotients are b_0..b_{pre+per-1}; the
    block of the last ``period_len`` of them repeats forever.
    """

    p: int
    b0: PAdicUnitFrac
    tail: tuple[PAdicUnitFrac, ...]
    status: str
    preperiod_len: int | None = None
    period_len: int | None = None
    kind: FloorKind = FloorKind.BROWKIN
    complete_quotients: tuple = field(default=(), repr=False, compare=False)

    @property
    def quotients(self) -> tuple[PAdicUnitFrac, ...]:
        return (self.b0,) + self.tail

    @property
    def values(self) -> list[Fraction]:
        return [b.value for b in self.quotients]

    @property
    def alpha(self):
        """The exact input value, when the expansion was computed from one."""
        return self.complete_quotients[0] if self.complete_quotients else None

    def to_json(self) -> dict:
        out = {
            "schema": 1,
            "p": self.p,
            "kind": self.kind.value,
            "b0": self.b0.to_json(),
            "tail": [b.to_json() for b in self.tail],
            "status": self.status,
        }
        if self.status == PERIODIC:
            out["preperiod_len"] = self.preperiod_len
            out["period_len"] = self.period_len
        if self.alpha is not None:
            out["value"] = format_value(self.alpha)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "CFExpansion":
        p = int(obj["p"])
        return cls(
            p=p,
            b0=PAdicUnitFrac.from_json(obj["b0"], p),
            tail=tuple(PAdicUnitFrac.from_json(b, p) for b in obj.get("tail", [])),
            status=obj.get("status", FINITE),
            preperiod_len=obj.get("preperiod_len"),
            period_len=obj.get("period_len"),
            kind=FloorKind(obj.get("kind", "browkin")),
        )

    def human(self) -> str:
        body = ", ".join(str(b) for b in self.quotients)
        if self.status == PERIODIC:
            return f"[{body}] {self.status}(preperiod={self.preperiod_len}, period={self.period_len})"
        return f"[{body}] {self.status}"


def expand(alpha, p: int | None = None, max_steps: int = DEFAULT_MAX_STEPS, detect_period: bool = True,
           kind: FloorKind | str = FloorKind.BROWKIN, budget: int | None = None) -> CFExpansion:
    """Iterate b_i = s(alpha_i), alpha_{i+1} = 1/(alpha_i - b_i) with exact complete quotients."""
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    kind = FloorKind(kind)
    if isinstance(alpha, QuadSurd):
        p = alpha.p if p is None else p
        if alpha.p != p:
            raise ValueError("surd must be embedded at the expansion prime")
    else:
        alpha = as_rat(alpha)
    check_prime(p)

    seen: dict[tuple, int] = {}
    quotients: list[PAdicUnitFrac] = []
    complete: list = []
    status, pre, per = TRUNCATED, None, None
    a = alpha
    for i in range(max_steps):
        if detect_period:
            key = value_key(a)
            if key in seen:
                status, pre, per = PERIODIC, seen[key], i - seen[key]
                break
            seen[key] = i
        b = floor(a, p, kind, budget)
        quotients.append(b)
        complete.append(a)
        rest = a - b.value
        if rest == 0:
            status = FINITE
            break
        a = 1 / rest
    return CFExpansion(p, quotients[0], tuple(quotients[1:]), status, pre, per, kind, tuple(complete))


def fold(quotients: Sequence) -> Fraction:
    """Value of the finite fraction [b0; b1, ..., bn] by backward nested evaluation."""
    qs = [as_rat(b) for b in quotients]
    x = qs[-1]
    for b in reversed(qs[:-1]):
        if x == 0:
            raise DivisionByZero("zero complete quotient while folding")
        x = b + 1 / x
    return x


# --------------------------------------------------------------------------
# Euclidean algorithm


@dataclass(frozen=True)
class EuclidStep:
    x: object
    y: object
    q: PAdicUnitFrac
    r: object

    def to_json(self) -> dict:
        return {"x": format_value(self.x), "y": format_value(self.y),
                "q": self.q.to_json(), "r": format_value(self.r)}


def euclid_divide(x, y, p: int, budget: int | None = None) -> EuclidStep:
    """Division x = q*y + r with q = s(x/y) in Z[1/p], |q|_inf < p/2 and |r|_p < |y|_p."""
    if not isinstance(y, QuadSurd) and as_rat(y) == 0:
        raise DivisionByZero("divisor is zero")
    if not isinstance(x, QuadSurd):
        x = as_rat(x)
    if not isinstance(y, QuadSurd):
        y = as_rat(y)
    q = floor(x / y, p, FloorKind.BROWKIN, budget)
    r = x - q.value * y
    return EuclidStep(x, y, q, r)


def euclid_algorithm(x0, x1, p: int, max_steps: int = DEFAULT_MAX_STEPS) -> list[EuclidStep]:
    """Iterate x_i = b_i x_{i+1} + x_{i+2} until the remainder vanishes.

    On rational input this terminates, and the quotients b_i are the Browkin
    partial quotients of x0/x1 (with b_0 = 0 whenever |x0|_p < |x1|_p).
    """
    x0, x1 = as_rat(x0), as_rat(x1)
    if x1 == 0:
        raise DivisionByZero("x1 must be nonzero")
    steps = []
    for _ in range(max_steps):
        step = euclid_divide(x0, x1, p)
        steps.append(step)
        if step.r == 0:
            return steps
        x0, x1 = x1, step.r
    raise RuntimeError(f"Euclidean algorithm did not stop within {max_steps} steps")


# --------------------------------------------------------------------------
# Convergents


@dataclass(frozen=True)
class ConvergentTable:
    """Rows n = -2, -1, 0, ... of A_n, B_n with e_n = v_p(A_n), f_n = v_p(B_n)."""

    p: int
    A_seq: tuple[Fraction, ...]
    B_seq: tuple[Fraction, ...]

    @property
    def last(self) -> int:
        return len(self.A_seq) - 3

    def A(self, n: int) -> Fraction:
        return self.A_seq[n + 2]

    def B(self, n: int) -> Fraction:
        return self.B_seq[n + 2]

    def e(self, n: int):
        return vp(self.A(n), self.p)

    def f(self, n: int):
        return vp(self.B(n), self.p)

    def convergent(self, n: int) -> Fraction:
        return self.A(n) / self.B(n)

    def determinant(self, n: int) -> Fraction:
        return self.A(n) * self.B(n - 1) - self.A(n - 1) * self.B(n)

    def rows(self):
        for n in range(-2, self.last + 1):
            yield n, self.A(n), self.B(n), self.e(n), self.f(n)


def convergents_of(quotients: Sequence, p: int) -> ConvergentTable:
    A = [Fraction(0), Fraction(1)]
    B = [Fraction(1), Fraction(0)]
    for b in quotients:
        b = as_rat(b)
        A.append(b * A[-1] + A[-2])
        B.append(b * B[-1] + B[-2])
    return ConvergentTable(p, tuple(A), tuple(B))


def convergents(cf: CFExpansion, n: int | None = None) -> ConvergentTable:
    """Table built from the first n partial quotients (all of them by default).

    Periodic expansions are unrolled when n exceeds the stored quotients.
    """
    qs = cf.quotients
    if n is None:
        n = len(qs)
    if n > len(qs) and cf.status == PERIODIC:
        block = qs[cf.preperiod_len:]
        qs = qs + tuple(block[i % len(block)] for i in range(n - len(qs)))
    if n > len(qs):
        raise ValueError(f"only {len(qs)} partial quotients available")
    return convergents_of(qs[:n], cf.p)


# --------------------------------------------------------------------------
# Valuation laws


@dataclass
class LawReport:
    checked: dict[str, int] = field(default_factory=dict)
    violations: list[tuple[str, int, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def _tick(self, law: str, n: int, good: bool, detail: str = ""):
        self.checked[law] = self.checked.get(law, 0) + 1
        if not good:
            self.violations.append((law, n, detail))

    def to_json(self) -> dict:
        return {"ok": self.ok, "checked": self.checked,
                "violations": [{"law": law, "n": n, "detail": d} for law, n, d in self.violations]}


def check_valuation_laws(table: ConvergentTable, cf: CFExpansion, alpha=None,
                         budget: int | None = None) -> LawReport:
    """Check laws (i)-(vi) for v_p of partial quotients, A_n, B_n and alpha - A_n/B_n."""
    p = cf.p
    rep = LawReport()
    qs = cf.values
    nq = min(len(qs), table.last + 1)
    vb = [vp(b, p) for b in qs[:nq]]
    if alpha is None:
        alpha = cf.alpha

    cq = cf.complete_quotients
    for n in range(1, min(nq, len(cq))):
        got = vp(cq[n], p)
        rep._tick("i", n, got == vb[n], f"v(b_n)={vb[n]} v(alpha_n)={got}")
    for n in range(1, nq):
        rep._tick("ii", n, vb[n] < 0, f"v(b_n)={vb[n]}")
    if nq and qs[0] != 0:
        for n in range(0, nq):
            rep._tick("iii", n, table.e(n) == sum(vb[: n + 1]), f"v(A_n)={table.e(n)}")
    else:
        for n in range(2, nq):
            rep._tick("iv", n, table.e(n) == sum(vb[2: n + 1]), f"v(A_n)={table.e(n)}")
    for n in range(1, nq):
        rep._tick("v", n, table.f(n) == sum(vb[1: n + 1]), f"v(B_n)={table.f(n)}")
    if alpha is not None:
        for n in range(0, nq - 1):
            expected = -(table.f(n) + table.f(n + 1))
            gap = alpha - table.convergent(n)
            try:
                got = vp_adaptive(gap, p, expected)
            except PrecisionExhausted:
                got = INF
            rep._tick("vi", n, got == expected, f"v(alpha - A_n/B_n)={got}, expected {expected}")
    return rep


def vp_surd(x: QuadSurd, p: int, expected: int) -> int:
    """Surd valuation with a digit budget sized for an anticipated valuation."""
    from .padic_digits import surd_valuation

    budget = max(default_precision(), 2 * abs(int(expected)) + 64)
    return surd_valuation(x, p, budget)


def vp_adaptive(x, p: int, expected: int = 0):
    if isinstance(x, QuadSurd):
        return vp_surd(x, p, expected)
    return vp(x, p)


# --------------------------------------------------------------------------
# Archimedean growth


@dataclass
class GrowthReport:
    M_A: Fraction
    M_B: Fraction
    eq7_holds: bool
    eq7_failures: list[tuple[str, int]]
    first_strict_index: int | None
    remark_B_holds: bool
    remark_B_failures: list[int]

    @property
    def ok(self) -> bool:
        return self.eq7_holds and self.remark_B_holds

    def to_json(self) -> dict:
        return {"M_A": str(self.M_A), "M_B": str(self.M_B), "eq7_holds": self.eq7_holds,
                "eq7_failures": self.eq7_failures, "first_strict_index": self.first_strict_index,
                "remark_B_holds": self.remark_B_holds, "remark_B_failures": self.remark_B_failures}


def growth_constant(x0: Fraction, x1: Fraction, p: int) -> Fraction:
    """An M with |x0| < M and |x1| < M (p/2 + 1)."""
    return max(abs(x0), abs(x1) / (Fraction(p, 2) + 1)) + 1


def archimedean_growth_check(table: ConvergentTable, cf: CFExpansion | None = None) -> GrowthReport:
    """Check |x_k|_inf < M (p/2+1)^k for x = A, B (k >= 0), find where the archimedean
    size drops strictly below the p-adic size, and check |B_n|_inf <= |B_n|_p for n >= -2."""
    p = table.p
    if table.last < 1:
        raise ValueError("need rows up to n = 1 at least")
    ratio = Fraction(p, 2) + 1
    M_A = growth_constant(table.A(0), table.A(1), p)
    M_B = growth_constant(table.B(0), table.B(1), p)
    failures = []
    for k in range(0, table.last + 1):
        bound_pow = ratio**k
        if not abs(table.A(k)) < M_A * bound_pow:
            failures.append(("A", k))
        if not abs(table.B(k)) < M_B * bound_pow:
            failures.append(("B", k))

    first = None
    for n in range(table.last, -3, -1):
        A, B = table.A(n), table.B(n)
        if abs(A) < abs_p(A, p) and abs(B) < abs_p(B, p):
            first = n
        else:
            break

    remark = [n for n in range(-2, table.last + 1) if not abs(table.B(n)) <= abs_p(table.B(n), p)]
    return GrowthReport(M_A, M_B, not failures, failures, first, not remark, remark)


# --------------------------------------------------------------------------
# Shared prefixes


@dataclass(frozen=True)
class PrefixGap:
    n: int
    gap_valuation: float | int
    threshold: int

    @property
    def holds(self) -> bool:
        return self.gap_valuation > self.threshold


def shared_prefix_gap(alpha, beta, p: int, n: int | None = None) -> PrefixGap:
    """For alpha, beta sharing partial quotients b_0..b_n, compare v_p(alpha - beta)
    against -2 v_p(B_n); the gap bound holds when the former is strictly larger."""
    steps = (n + 2) if n is not None else DEFAULT_MAX_STEPS
    ea = expand(alpha, p, max_steps=steps, detect_period=False)
    eb = expand(beta, p, max_steps=steps, detect_period=False)
    common = 0
    for x, y in zip(ea.quotients, eb.quotients):
        if x != y:
            break
        common += 1
    if n is None:
        n = common - 1
    if common < n + 1 or n < 0:
        raise ValueError(f"alpha and beta share only {common} partial quotients")
    table = convergents_of(ea.quotients[: n + 1], p)
    threshold = -2 * table.f(n)
    diff = alpha - beta
    gap = INF if (not isinstance(diff, QuadSurd) and diff == 0) else vp_adaptive(diff, p, threshold)
    return PrefixGap(n, gap, threshold)
