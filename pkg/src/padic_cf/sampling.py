"""Seeded random inputs for audits and sweeps."""

from __future__ import annotations

import random
from fractions import Fraction

from .families import hypothesis1_check
from .heights import PeriodicCF, fibonacci


def random_rational(rng: random.Random, bound: int = 10**6) -> Fraction:
    """Nonzero num/den with |num|, den <= bound."""
    while True:
        num = rng.randint(-bound, bound)
        if num:
            return Fraction(num, rng.randint(1, bound))


def random_quotient(rng: random.Random, p: int, max_exp: int = 4) -> Fraction:
    """A Browkin partial quotient u/p^a with 1 <= a <= max_exp."""
    a = rng.randint(1, max_exp)
    half = (p ** (a + 1) - 1) // 2
    while True:
        u = rng.randint(-half, half)
        if u % p:
            return Fraction(u, p**a)


def random_periodic_cf(rng: random.Random, p: int, k_max: int = 4, t_max: int = 3,
                       max_exp: int = 4) -> PeriodicCF:
    """[0, b_1..b_k, overline(b_{k+1}..b_{k+t+1})] with 1 <= k <= k_max, 0 <= t <= t_max."""
    k = rng.randint(1, k_max)
    t = rng.randint(0, t_max)
    pre = (Fraction(0),) + tuple(random_quotient(rng, p, max_exp) for _ in range(k))
    per = tuple(random_quotient(rng, p, max_exp) for _ in range(t + 1))
    return PeriodicCF(p, pre, per)


def random_h1_prefix(rng: random.Random, p: int, k_max: int = 5, max_exp: int = 3,
                     exempt_rate: float = 0.3) -> list[Fraction]:
    """A prefix b_1..b_k satisfying Hypothesis 1, found by rejection on the exponents."""
    while True:
        k = rng.randint(1, k_max)
        exps = [rng.randint(1, max_exp) for _ in range(k)]
        others = [a for a in exps if a != 1]
        a = min(others) if others else 1
        F = fibonacci(k + 1)
        out = []
        for ai in exps:
            limit = (p ** (ai + 1) - 1) // 2
            choices = [u for u in range(-limit, limit + 1)
                       if u % p and 14 * u * u * F * F < 3 * p ** (2 * a)]
            if ai == 1 and (rng.random() < exempt_rate or not choices):
                out.append(Fraction(1, p))
            elif choices:
                out.append(Fraction(rng.choice(choices), p**ai))
            else:
                break
        else:
            if hypothesis1_check(out, p).passes:
                return out
