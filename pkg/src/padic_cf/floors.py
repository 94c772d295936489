"""p-adic floor functions: Browkin (balanced digits), Ruban (digits 0..p-1) and the
diagnostic counterexample s(a) = p^v(a) that breaks the contraction property."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .errors import PrecisionExhausted
from .exact_arith import PAdicUnitFrac, QuadSurd, as_rat, is_s_integer, vp
from .padic_digits import PAdicApprox, digits_of, unit_residue


class FloorKind(str, enum.Enum):
    BROWKIN = "browkin"
    RUBAN = "ruban"
    COUNTEREXAMPLE = "counterexample"


def _floor_of_approx(x: PAdicApprox, kind: FloorKind) -> PAdicUnitFrac:
    p = x.p
    if x.is_zero:
        if x.precision < 1:
            raise PrecisionExhausted("zero approximation does not reach index 0")
        return PAdicUnitFrac(p, 0, 0)
    r = x.r
    if r >= 1:
        return PAdicUnitFrac(p, 0, 0)
    if kind is FloorKind.COUNTEREXAMPLE:
        return PAdicUnitFrac(p, 1, -r)
    need = 1 - r
    if len(x.digits) < need:
        raise PrecisionExhausted(f"need digits down to index 0 ({need} digits), have {len(x.digits)}")
    head = sum(d * p**i for i, d in enumerate(x.digits[:need]))
    if kind is FloorKind.RUBAN:
        head %= p**need
    return PAdicUnitFrac(p, head, -r)


def floor(x, p: int | None = None, kind: FloorKind | str = FloorKind.BROWKIN,
          budget: int | None = None) -> PAdicUnitFrac:
    """Floor s(x) in Z[1/p], truncating the expansion of x after index 0.

    Accepts a rational, a :class:`QuadSurd` (embedded through its branch) or a
    :class:`PAdicApprox` whose digits reach index 0.
    """
    kind = FloorKind(kind)
    if isinstance(x, PAdicApprox):
        return _floor_of_approx(x, kind)
    if p is None:
        p = x.p if isinstance(x, QuadSurd) else None
    if p is None:
        raise ValueError("p is required")
    if not isinstance(x, QuadSurd):
        x = as_rat(x)
        if x == 0:
            return PAdicUnitFrac(p, 0, 0)
    r, _ = unit_residue(x, p, 1, budget)
    if r >= 1:
        return PAdicUnitFrac(p, 0, 0)
    return _floor_of_approx(digits_of(x, p, 1 - r, budget), kind)


@dataclass(frozen=True)
class FloorContract:
    value: PAdicUnitFrac
    in_S_integers: bool
    archimedean_bound: bool
    padic_contraction: bool

    @property
    def all_hold(self) -> bool:
        return self.in_S_integers and self.archimedean_bound and self.padic_contraction

    def to_json(self) -> dict:
        return {"floor": str(self.value), "in_S_integers": self.in_S_integers,
                "archimedean_bound": self.archimedean_bound,
                "padic_contraction": self.padic_contraction}


def check_floor_contract(x, kind: FloorKind | str = FloorKind.BROWKIN, p: int | None = None,
                         budget: int | None = None) -> FloorContract:
    """Evaluate: s(x) in Z[1/p]; |s(x)|_inf < p/2; |x - s(x)|_p < 1."""
    kind = FloorKind(kind)
    if isinstance(x, PAdicApprox):
        p = x.p
    elif p is None:
        p = x.p
    s = floor(x, p, kind, budget)
    sv = s.value
    target = x.value() if isinstance(x, PAdicApprox) else x
    diff = target - sv
    contraction = diff == 0 or vp(diff, p) >= 1
    return FloorContract(
        value=s,
        in_S_integers=is_s_integer(sv, p),
        archimedean_bound=abs(sv) < Fraction(p, 2),
        padic_contraction=bool(contraction),
    )
