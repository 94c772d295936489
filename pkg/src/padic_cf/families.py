"""Partial-quotient families: the Hypothesis 1 size test, quasi-periodic and
block-repetition generators with independent certificate checkers, the
p^-1-tail approximants, palindromes, Sturmian and Thue-Morse words, and
subspace-style approximation witnesses."""

from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

from .cf_engine import convergents_of, vp_adaptive
from .errors import InfeasibleSpec, RationalSlope
from .exact_arith import INF, QuadSurd, abs_p, as_rat, vp
from .heights import PeriodicCF, fibonacci, is_browkin_quotient, naive_height, periodic_to_relation


def _rats(seq) -> list[Fraction]:
    return [as_rat(b) for b in seq]


def _split(b: Fraction, p: int) -> tuple[int, int]:
    """b = b^ / p^a with p not dividing b^; returns (b^, a)."""
    a = -vp(b, p)
    return int(b * Fraction(p) ** a), a


# --------------------------------------------------------------------------
# Hypothesis 1


@dataclass(frozen=True)
class Hypothesis1Report:
    p: int
    k: int
    a: int
    fib: int
    bound_sq: Fraction
    violations: tuple[int, ...]

    @property
    def passes(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "a": self.a, "fib": self.fib,
                "bound_sq": str(self.bound_sq), "bound": math.sqrt(self.bound_sq),
                "violations": list(self.violations), "passes": self.passes}


def hypothesis1_check(prefix: Sequence, p: int) -> Hypothesis1Report:
    """14 b^_i^2 F_{k+1}^2 < 3 p^(2a) for every b_i != 1/p, with a = min{a_i : a_i != 1}.

    When every a_i equals 1 the minimum is taken as 1. Indices are 1-based; an
    index with a_i <= 0 is always a violation.
    """
    bs = _rats(prefix)
    if not bs:
        raise ValueError("prefix must be nonempty")
    k = len(bs)
    split = [_split(b, p) if b != 0 else (0, 0) for b in bs]
    others = [a for _, a in split if a != 1]
    a = min(others) if others else 1
    F = fibonacci(k + 1)
    inv_p = Fraction(1, p)
    bad = []
    for i, (b, (bh, ai)) in enumerate(zip(bs, split), start=1):
        if ai <= 0:
            bad.append(i)
        elif b != inv_p and not 14 * bh * bh * F * F < 3 * p ** (2 * a):
            bad.append(i)
    return Hypothesis1Report(p, k, a, F, Fraction(3 * p ** (2 * a), 14 * F * F), tuple(bad))


# --------------------------------------------------------------------------
# Quasi-periodic and block-repetition families


@dataclass
class QPerSpec:
    """Runs b_{n_i} = ... = b_{n_i + lambda_i k_i - 1} = 1/p separated by filler quotients."""

    p: int
    C: Fraction
    D_cap: int
    filler_pool: tuple = ()
    n0: int = 2
    k: int = 1
    gap: int = 1
    k_cap: int = 8
    i0_cap: int = 3
    ks: tuple[int, ...] | None = None
    lambdas: tuple[int, ...] | None = None
    seed: int = 0

    def __post_init__(self):
        self.C = as_rat(self.C)
        self.filler_pool = tuple(_rats(self.filler_pool))

    def k_at(self, i: int) -> int:
        return self.ks[i] if self.ks and i < len(self.ks) else (self.ks[-1] if self.ks else self.k)

    def lambda_at(self, i: int, n_i: int) -> int:
        if self.lambdas and i < len(self.lambdas):
            return self.lambdas[i]
        return math.ceil(self.C * n_i) + 1

    threshold_factor = 2

    @classmethod
    def from_json(cls, obj: dict) -> "QPerSpec":
        from .exact_arith import parse_rat

        kw = dict(obj)
        kw.pop("family", None)
        kw.pop("block", None)
        kw["C"] = parse_rat(str(kw["C"]))
        if "filler_pool" in kw:
            kw["filler_pool"] = tuple(parse_rat(str(x)) for x in kw["filler_pool"])
        for name in ("ks", "lambdas"):
            if kw.get(name) is not None:
                kw[name] = tuple(int(x) for x in kw[name])
        return cls(**kw)


@dataclass
class OotoSpec(QPerSpec):
    """Runs where a block of length k_i is written lambda_i times starting at n_i."""

    block: tuple = ()

    def __post_init__(self):
        super().__post_init__()
        self.block = tuple(_rats(self.block))
        if not self.block:
            raise ValueError("block must be nonempty")
        if self.ks is None:
            self.k = len(self.block)

    threshold_factor = 4

    @classmethod
    def from_json(cls, obj: dict) -> "OotoSpec":
        from .exact_arith import parse_rat

        obj = dict(obj)
        block = tuple(parse_rat(str(x)) for x in obj.pop("block"))
        base = QPerSpec.from_json(obj)
        kw = {f: getattr(base, f) for f in QPerSpec.__dataclass_fields__}
        return cls(block=block, **kw)


@dataclass(frozen=True)
class Run:
    n: int
    k: int
    lam: int

    @property
    def end(self) -> int:
        return self.n + self.lam * self.k - 1


@dataclass
class FamilyResult:
    family: str
    p: int
    sequence: list[Fraction]
    runs: list[Run]
    certificate: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"schema": 1, "family": self.family, "p": self.p,
                "sequence": [str(b) for b in self.sequence],
                "runs": [asdict(r) for r in self.runs],
                "certificate": self.certificate}


def _schedule(spec: QPerSpec, length: int) -> list[Run]:
    runs, n, i = [], spec.n0, 0
    while True:
        r = Run(n, spec.k_at(i), spec.lambda_at(i, n))
        if r.end > length:
            return runs
        runs.append(r)
        n, i = r.end + 1 + spec.gap, i + 1


def _validate_spec(spec: QPerSpec, pieces: Sequence[Fraction]):
    if spec.n0 < 2:
        raise InfeasibleSpec("n0 must be >= 2 so that at least one filler precedes the first run")
    for b in pieces:
        if not is_browkin_quotient(b, spec.p) or abs_p(b, spec.p) > spec.D_cap:
            raise InfeasibleSpec(f"{b} is not a Browkin quotient with |b|_p <= {spec.D_cap}")
    for b in spec.filler_pool:
        if not hypothesis1_check([b], spec.p).passes:
            raise InfeasibleSpec(f"filler {b} violates Hypothesis 1 even on its own")


def _generate(spec: QPerSpec, length: int, run_body, offset: int) -> tuple[list[Fraction], list[Run]]:
    """Fill around the runs. Each filler is scored against the longest prefix the
    certificate will test (b_1..b_{n_i + offset}), padded with exempt 1/p terms,
    since the Hypothesis 1 bound shrinks as the prefix grows."""
    runs = _schedule(spec, length)
    horizon = max((r.n + offset for r in runs), default=length)
    pad = [Fraction(1, spec.p)]
    rng = random.Random(spec.seed)
    seq: list[Fraction] = []
    starts = {r.n: r for r in runs}
    while len(seq) < length:
        pos = len(seq) + 1
        if pos in starts:
            r = starts[pos]
            seq.extend(run_body(r))
            continue
        pool = list(spec.filler_pool)
        rng.shuffle(pool)
        # fewest Hypothesis 1 violations; runs may already force some
        def score(b):
            trial = seq + [b]
            return len(hypothesis1_check(trial + pad * max(0, horizon - len(trial)), spec.p).violations)

        seq.append(min(pool, key=score))
    return seq[:length], runs


def gen_qper(spec: QPerSpec, length: int) -> FamilyResult:
    """Quasi-periodic sequence b_1..b_length plus its certificate."""
    inv_p = Fraction(1, spec.p)
    _validate_spec(spec, spec.filler_pool + (inv_p,))
    if not spec.filler_pool:
        raise InfeasibleSpec("filler pool is empty")
    seq, runs = _generate(spec, length, lambda r: [inv_p] * (r.lam * r.k), offset=-1)
    return FamilyResult("qper", spec.p, seq, runs, certify_qper(seq, runs, spec))


def gen_ooto(spec: OotoSpec, length: int) -> FamilyResult:
    """Block-repetition sequence b_1..b_length plus its certificate."""
    _validate_spec(spec, spec.filler_pool + spec.block)
    if not spec.filler_pool:
        raise InfeasibleSpec("filler pool is empty")

    def body(r: Run):
        unit = [spec.block[j % len(spec.block)] for j in range(r.k)]
        return unit * r.lam

    seq, runs = _generate(spec, length, body, offset=0)
    return FamilyResult("ooto", spec.p, seq, runs, certify_ooto(seq, runs, spec))


# Certificates. These re-evaluate each hypothesis from the sequence and the
# declared runs only; nothing is carried over from the generator.


def _entry(name: str, passes: bool, **detail) -> dict:
    return {"hypothesis": name, "pass": bool(passes), **detail}


def _common_entries(seq: list[Fraction], runs: Sequence[Run], spec: QPerSpec) -> list[dict]:
    p = spec.p
    out = []
    bad_q = [i for i, b in enumerate(seq, 1) if not is_browkin_quotient(b, p)]
    out.append(_entry("browkin_quotients", not bad_q, bad_indices=bad_q))
    sizes = [abs_p(b, p) for b in seq]
    biggest = max(sizes) if sizes else Fraction(1)
    out.append(_entry("bounded_p_size", biggest <= spec.D_cap, D=spec.D_cap, max_abs_p=str(biggest),
                      margin=str(spec.D_cap - biggest)))
    kmax = max((r.k for r in runs), default=0)
    out.append(_entry("k_bounded", kmax <= spec.k_cap, k_max=kmax, k_cap=spec.k_cap))
    bad_gap = [i for i in range(1, len(runs)) if runs[i].n < runs[i - 1].n + runs[i - 1].lam * runs[i - 1].k]
    out.append(_entry("run_spacing", not bad_gap, bad_runs=bad_gap))

    holds = [Fraction(r.lam) > spec.C * r.n for r in runs]
    i0 = len(runs)
    while i0 > 0 and holds[i0 - 1]:
        i0 -= 1
    margins = [str(Fraction(r.lam) - spec.C * r.n) for r in runs]
    out.append(_entry("lambda_growth", bool(runs) and i0 < len(runs) and i0 <= spec.i0_cap,
                      i0=i0, i0_cap=spec.i0_cap, margins=margins))

    factor = spec.threshold_factor
    thr = factor * math.log(spec.D_cap) / math.log(p) - 1
    out.append(_entry("C_threshold", float(spec.C) > thr, C=str(spec.C), threshold=thr,
                      margin=float(spec.C) - thr, factor=factor))
    return out


def _summary(family: str, entries: list[dict]) -> dict:
    return {"schema": 1, "family": family, "all_pass": all(e["pass"] for e in entries), "hypotheses": entries}


def certify_qper(seq: Sequence, runs: Sequence[Run], spec: QPerSpec) -> dict:
    seq = _rats(seq)
    p = spec.p
    inv_p = Fraction(1, p)
    entries = _common_entries(seq, runs, spec)
    broken = []
    for r in runs:
        for h in range(r.n, r.end + 1):
            if h > len(seq) or seq[h - 1] != inv_p:
                broken.append(h)
    entries.append(_entry("runs_of_inverse_p", bool(runs) and not broken, broken_at=broken))
    # Hypothesis 1 on (b_1, ..., b_{n_i - 1})
    failing = [i for i, r in enumerate(runs) if not hypothesis1_check(seq[: r.n - 1], p).passes]
    entries.append(_entry("hypothesis1", not failing, prefix_end="n_i - 1", failing_runs=failing))
    return _summary("qper", entries)


def certify_ooto(seq: Sequence, runs: Sequence[Run], spec: OotoSpec) -> dict:
    seq = _rats(seq)
    p = spec.p
    entries = _common_entries(seq, runs, spec)
    broken = []
    for r in runs:
        # b_{h+k} = b_h for n <= h <= n + (lam - 1) k - 1
        for h in range(r.n, r.n + (r.lam - 1) * r.k):
            if h + r.k > len(seq) or seq[h + r.k - 1] != seq[h - 1]:
                broken.append(h)
    entries.append(_entry("block_repetition", bool(runs) and not broken, broken_at=broken))
    failing = [i for i, r in enumerate(runs) if not hypothesis1_check(seq[: r.n], p).passes]
    entries.append(_entry("hypothesis1", not failing, prefix_end="n_i", failing_runs=failing))
    return _summary("ooto", entries)


# --------------------------------------------------------------------------
# Approximants with a 1/p tail


def inverse_p_tail(p: int) -> QuadSurd:
    """gamma = [overline(1/p)], the root of p x^2 - x - p with that expansion."""
    return PeriodicCF(p, (), (Fraction(1, p),)).value()


@dataclass
class BetaReport:
    beta: QuadSurd
    shared_until: int
    gap_valuation: int | float
    threshold: int
    predicted: int | float
    h: Fraction
    h_bound: Fraction

    @property
    def gap_holds(self) -> bool:
        return self.gap_valuation > self.threshold

    @property
    def height_holds(self) -> bool:
        return self.h <= self.h_bound

    def to_json(self) -> dict:
        return {"beta": str(self.beta), "shared_until": self.shared_until,
                "gap_valuation": self.gap_valuation, "threshold": self.threshold,
                "predicted": self.predicted, "gap_holds": self.gap_holds,
                "h": str(self.h), "h_bound": str(self.h_bound), "height_holds": self.height_holds}


def beta_approximant(alpha_prefix: Sequence, n_i: int, p: int) -> BetaReport:
    """beta = [0, b_1, ..., b_{n_i - 1}, overline(1/p)] for alpha = [0, b_1, b_2, ...].

    ``alpha_prefix`` lists b_1, b_2, ...; it must extend at least one quotient
    beyond the last index shared with beta, so the gap valuation is exact.
    """
    bs = _rats(alpha_prefix)
    if n_i < 2 or len(bs) < n_i - 1:
        raise ValueError("need n_i >= 2 and at least n_i - 1 quotients")
    inv_p = Fraction(1, p)
    gamma = inverse_p_tail(p)
    head = [Fraction(0)] + bs[: n_i - 1]
    t = convergents_of(head, p)
    m = t.last
    beta = (gamma * t.A(m) + t.A(m - 1)) / (gamma * t.B(m) + t.B(m - 1))

    # last index (in alpha's numbering, b_0 = 0) where alpha and beta agree
    shared = n_i - 1
    while shared + 1 <= len(bs) and bs[shared] == inv_p:
        shared += 1
    if shared + 1 > len(bs):
        from .errors import PrecisionExhausted

        raise PrecisionExhausted("alpha prefix ends inside the shared stretch; gap is not determined")
    full = convergents_of([Fraction(0)] + bs, p)
    L = full.last
    x = full.convergent(L)  # v_p(alpha - x) = -(f_L + f_{L+1}) > -2 f_L
    approx_acc = -2 * full.f(L)
    threshold = -2 * full.f(shared)
    gap = vp_adaptive(x - beta, p, threshold)
    if gap >= approx_acc:
        from .errors import PrecisionExhausted

        raise PrecisionExhausted("alpha prefix too short to resolve the gap")
    b_a = bs[shared]
    predicted = vp(b_a - inv_p, p) - vp(b_a, p) - vp(inv_p, p) - 2 * full.f(shared)

    rel = periodic_to_relation(PeriodicCF(p, tuple(head), (inv_p,)))
    h = naive_height(rel.cleared)
    return BetaReport(beta, shared, gap, threshold, predicted, h, abs_p(t.B(m), p) ** 2)


# --------------------------------------------------------------------------
# Palindromes


def mat_mul(X, Y):
    return ((X[0][0] * Y[0][0] + X[0][1] * Y[1][0], X[0][0] * Y[0][1] + X[0][1] * Y[1][1]),
            (X[1][0] * Y[0][0] + X[1][1] * Y[1][0], X[1][0] * Y[0][1] + X[1][1] * Y[1][1]))


def quotient_matrix(bs: Sequence) -> tuple:
    """M_n = prod [[b_i, 1], [1, 0]] = [[B_n, B_{n-1}], [A_n, A_{n-1}]] when b_0 = 0."""
    M = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
    for b in bs:
        M = mat_mul(M, ((as_rat(b), Fraction(1)), (Fraction(1), Fraction(0))))
    return M


def is_palindrome(w: Sequence) -> bool:
    w = list(w)
    return w == w[::-1]


@dataclass(frozen=True)
class PalindromeReport:
    n: int
    palindromic: bool
    symmetric: bool
    A_eq_Bprev: bool
    sq_approx_valuation: int | float | None
    bound_valuation: int | None

    @property
    def consistent(self) -> bool:
        return self.palindromic == self.symmetric and (not self.palindromic or self.A_eq_Bprev)

    @property
    def bound_holds(self) -> bool | None:
        if self.sq_approx_valuation is None:
            return None
        return self.sq_approx_valuation >= self.bound_valuation

    def to_json(self) -> dict:
        d = asdict(self)
        d["consistent"] = self.consistent
        d["bound_holds"] = self.bound_holds
        return d


def _tail_and_alpha(cf, alpha):
    from .cf_engine import CFExpansion

    if isinstance(cf, CFExpansion):
        if alpha is None and cf.alpha is not None:
            alpha = cf.alpha - cf.b0.value
        return [b.value for b in cf.tail], cf.p, alpha
    return None, None, alpha


def palindrome_analysis(cf, n: int, p: int | None = None, alpha=None) -> PalindromeReport:
    """Symmetry of M_n against palindromicity of (b_1..b_n) for alpha = [0, b_1, b_2, ...].

    ``cf`` is either a CFExpansion (its b_0 is dropped) or the list b_1, b_2, ...
    """
    bs, p2, alpha = _tail_and_alpha(cf, alpha)
    if bs is None:
        bs = _rats(cf)
    else:
        p = p2
    if not 1 <= n <= len(bs):
        raise ValueError(f"n must be in 1..{len(bs)}")
    w = bs[:n]
    M = quotient_matrix(w)
    Bn, Bn1, An, An1 = M[0][0], M[0][1], M[1][0], M[1][1]
    sq = bound = None
    if alpha is not None:
        va = vp_adaptive(alpha, p, 0)
        fn, fn1 = vp(Bn, p), vp(Bn1, p)
        bound = min(va - 2 * fn, va - fn - fn1)
        diff = alpha * alpha - An1 / Bn
        sq = INF if (not isinstance(diff, QuadSurd) and diff == 0) else vp_adaptive(diff, p, bound)
    return PalindromeReport(n, is_palindrome(w), M[0][1] == M[1][0], An == Bn1, sq, bound)


@dataclass(frozen=True)
class SubspaceWitness:
    n: int
    applicable: bool
    gap_linear: int | float | None = None
    gap_square: int | float | None = None
    f: int | None = None
    delta: Fraction | None = None
    size_x: bool | None = None
    size_y: bool | None = None
    size_z: bool | None = None

    @property
    def exceeds_15_8(self) -> bool:
        return self.delta is not None and self.delta > Fraction(15, 8)

    def to_json(self) -> dict:
        d = asdict(self)
        d["delta"] = None if self.delta is None else str(self.delta)
        d["delta_float"] = None if self.delta is None else float(self.delta)
        d["exceeds_15_8"] = self.exceeds_15_8
        return d


def _small(x: Fraction, p: int) -> bool:
    """|x|_inf < |x|_p^(1/4), compared as |x|^4 < |x|_p."""
    return x != 0 and x**4 < abs_p(x, p)


def subspace_witness(cf, n: int, p: int | None = None, alpha=None) -> SubspaceWitness:
    """For (x, y, z) = (A_n, A_{n-1}, B_n) at a palindromic prefix, the exponent
    delta_n = min(v_p(alpha - x/z), v_p(alpha^2 - y/z)) / (-v_p(z)) and the three
    size conditions |.|_inf < |.|_p^(1/4)."""
    bs, p2, alpha = _tail_and_alpha(cf, alpha)
    if bs is None:
        bs = _rats(cf)
    else:
        p = p2
    if alpha is None:
        raise ValueError("alpha is required")
    w = bs[:n]
    if len(w) < n or not is_palindrome(w):
        return SubspaceWitness(n, False)
    M = quotient_matrix(w)
    z, x, y = M[0][0], M[1][0], M[1][1]
    f = -vp(z, p)
    g1 = vp_adaptive(alpha - x / z, p, -2 * f)
    g2 = vp_adaptive(alpha * alpha - y / z, p, -2 * f)
    delta = Fraction(min(g1, g2)) / f
    return SubspaceWitness(n, True, g1, g2, f, delta, _small(x, p), _small(y, p), _small(z, p))


# --------------------------------------------------------------------------
# Sturmian and Thue-Morse words


@dataclass(frozen=True)
class SturmianSlope:
    theta: QuadSurd
    a: object
    b: object

    def __post_init__(self):
        if not isinstance(self.theta, QuadSurd) or self.theta.b == 0:
            raise RationalSlope("slope must be an irrational quadratic surd")
        if self.theta.D < 0:
            raise ValueError("slope must be real")
        if floor_mul(self.theta, 1) != 0:
            raise ValueError("slope must lie in (0, 1)")
        if self.a == self.b:
            raise ValueError("the two letters must differ")


def floor_mul(theta: QuadSurd, n: int) -> int:
    """floor(n * theta) for real theta = (P + Q sqrt D)/R by integer square roots."""
    P, Q, R, D = theta.P, theta.Q, theta.R, theta.D
    s = n * P
    M = n * n * Q * Q * D
    m = math.isqrt(M)
    if m * m == M:
        return (s + (m if n * Q >= 0 else -m)) // R
    # sqrt(M) lies strictly between m and m + 1
    return (s + m) // R if n * Q > 0 else (s - m - 1) // R


def gen_sturmian(slope: SturmianSlope, N: int) -> list:
    """c_1..c_N with c_n = a when floor((n+1) theta) - floor(n theta) = 0, else b."""
    out = []
    prev = floor_mul(slope.theta, 1)
    for n in range(1, N + 1):
        cur = floor_mul(slope.theta, n + 1)
        out.append(slope.a if cur == prev else slope.b)
        prev = cur
    return out


def gen_thue_morse(values: tuple, N: int) -> list:
    """c_0..c_{N-1}: a when n has an even number of binary ones, else b."""
    a, b = values
    if a == b:
        raise ValueError("the two letters must differ")
    return [a if bin(n).count("1") % 2 == 0 else b for n in range(N)]


def is_balanced(word: Sequence, letter, m: int) -> bool:
    """All length-m windows contain the letter a number of times within 1 of each other."""
    counts = [sum(1 for c in word[i:i + m] if c == letter) for i in range(len(word) - m + 1)]
    return not counts or max(counts) - min(counts) <= 1


def is_cube_free(word: Sequence) -> bool:
    w = list(word)
    n = len(w)
    for L in range(1, n // 3 + 1):
        for i in range(n - 3 * L + 1):
            if w[i:i + L] == w[i + L:i + 2 * L] == w[i + 2 * L:i + 3 * L]:
                return False
    return True
