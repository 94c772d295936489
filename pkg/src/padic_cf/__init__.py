"""Browkin p-adic continued fractions with exact arithmetic."""

from .cf_engine import (
    CFExpansion,
    ConvergentTable,
    check_valuation_laws,
    convergents,
    convergents_of,
    euclid_algorithm,
    euclid_divide,
    expand,
    fold,
)
from .exact_arith import PAdicUnitFrac, QuadSurd, Rat, abs_p, parse_value, vp
from .floors import FloorKind, check_floor_contract, floor
from .heights import (
    PeriodicCF,
    QuadraticRelation,
    check_h1_bound,
    check_h2_bound,
    naive_height,
    periodic_to_relation,
    weil_height_deg2,
)
from .padic_digits import PAdicApprox, digits_of

__version__ = "0.1.0"
