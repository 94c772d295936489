"""Acceptance criteria 1-11. Each test prints one PASS/FAIL line."""

import itertools
import random
import time
from fractions import Fraction

import pytest

from padic_cf import cf_engine as ce
from padic_cf import families as fm
from padic_cf import heights as H
from padic_cf.exact_arith import QuadSurd, abs_p, vp
from padic_cf.floors import FloorKind, check_floor_contract, floor
from padic_cf.sampling import random_h1_prefix, random_periodic_cf, random_quotient, random_rational

PRIMES = (3, 5, 7, 11)
_CACHE: dict = {}


@pytest.fixture
def verdict(capsys):
    def emit(number: int, title: str, ok: bool, detail: str = ""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}" + (f" ({detail})" if detail else ""))
        assert ok, detail

    return emit


def rational_corpus():
    if "corpus" not in _CACHE:
        rng = random.Random(20240101)
        _CACHE["corpus"] = {p: [random_rational(rng, 10**6) for _ in range(1000)] for p in PRIMES}
    return _CACHE["corpus"]


def test_criterion_01_worked_example(verdict):
    start = time.perf_counter()
    cf = H.PeriodicCF(5, (0, Fraction(4, 25), Fraction(-3, 125)), (Fraction(1, 5),))
    rel = H.periodic_to_relation(cf)
    rep = H.check_h2_bound([Fraction(4, 25), Fraction(-3, 125)], 5)
    elapsed = time.perf_counter() - start
    ok = (rel.cleared == (9129469, 5530075, -9713125) and H.naive_height(rel) == 9713125
          and rep.naive_h == 9713125 and rep.bound_value == 5**10 == 9765625 and rep.bound_holds
          and elapsed < 1.0)
    verdict(1, "paper example reproduction", ok, f"{rel.polynomial_str()}, h={rep.naive_h}, {elapsed:.3f}s")


def test_criterion_02_termination(verdict):
    start = time.perf_counter()
    bad = []
    expansions = {}
    for p, xs in rational_corpus().items():
        for x in xs:
            cf = ce.expand(x, p, max_steps=10_000)
            expansions[(p, x)] = cf
            if cf.status != ce.FINITE or ce.fold(cf.values) != x:
                bad.append((p, x, cf.status))
    elapsed = time.perf_counter() - start
    _CACHE["expansions"] = expansions
    verdict(2, "termination on Q", not bad and elapsed < 30,
            f"{len(expansions)} expansions, {len(bad)} failures, {elapsed:.1f}s")


def test_criterion_03_valuation_laws(verdict):
    expansions = _CACHE.get("expansions") or {
        (p, x): ce.expand(x, p) for p, xs in rational_corpus().items() for x in xs}
    violations = []
    checked = 0
    for (p, x), cf in expansions.items():
        rep = ce.check_valuation_laws(ce.convergents(cf), cf, alpha=x)
        checked += sum(rep.checked.values())
        violations += [(p, str(x), v) for v in rep.violations]
    verdict(3, "valuation laws (i)-(vi)", not violations, f"{checked} checks, {len(violations)} violations")


def test_criterion_04_euclid_floor(verdict):
    rng = random.Random(4)
    bad = []
    for i in range(500):
        p = PRIMES[i % 4]
        x, y = random_rational(rng), random_rational(rng)
        s = ce.euclid_divide(x, y, p)
        if s.q != floor(x / y, p) or not (s.r == 0 or abs_p(s.r, p) < abs_p(y, p)):
            bad.append((p, x, y, "divide"))
        stream = [st.q.value for st in ce.euclid_algorithm(x, y, p)]
        if stream != ce.expand(x / y, p).values:
            bad.append((p, x, y, "stream"))
    verdict(4, "Euclid/floor consistency", not bad, f"500 pairs, {len(bad)} violations")


def test_criterion_05_ruban_contrast(verdict):
    rows = []
    for p in (3, 5, 7):
        r = ce.expand(Fraction(-p), p, max_steps=50, kind=FloorKind.RUBAN)
        b = ce.expand(Fraction(-p), p, max_steps=50, kind=FloorKind.BROWKIN)
        rows.append((p, r.status, b.status))
    ok = all(r == ce.PERIODIC and b == ce.FINITE for _, r, b in rows)
    verdict(5, "Ruban contrast on -p", ok, "; ".join(f"p={p}: ruban {r}, browkin {b}" for p, r, b in rows))


def test_criterion_06_h1_audit(verdict):
    rng = random.Random(6)
    bad = []
    for i in range(200):
        cf = random_periodic_cf(rng, PRIMES[i % 4], k_max=4, t_max=3, max_exp=4)
        rep = H.check_h1_bound(cf)
        residual = rep.details["residual_valuation"]
        if not rep.bound_holds or residual < 60:
            bad.append((cf, rep.naive_h, rep.bound_value, residual))
    verdict(6, "h1 height bound", not bad, f"200 periodic fractions, {len(bad)} failures")


def test_criterion_07_h2_audit(verdict):
    counts = {}
    first = {}
    for p in (5, 7, 11):
        rng = random.Random(700 + p)
        c = {"h": 0, "B": 0, "A": 0}
        for _ in range(100):
            prefix = random_h1_prefix(rng, p)
            rep = H.check_h2_bound(prefix, p)
            fails = {"h": not rep.bound_holds, "B": not rep.details["B_k_inf_sq_below"],
                     "A": not rep.details["A_k_inf_sq_below"]}
            for key, failed in fails.items():
                if failed:
                    c[key] += 1
                    first.setdefault(key, (p, [str(b) for b in prefix], str(rep.naive_h), str(rep.bound_value)))
        counts[p] = c
    fib_ok = all(H.fibonacci_term_count(k) == H.fibonacci(k + 1) for k in range(1, 13))
    ok = fib_ok and all(v == 0 for c in counts.values() for v in c.values())
    detail = f"failures per p {counts}; fibonacci ok={fib_ok}; first counterexamples {first}"
    verdict(7, "h2 height bound and size claims", ok, detail)


def test_criterion_08_shared_prefix(verdict):
    rng = random.Random(8)
    bad = []
    for i in range(100):
        p = PRIMES[i % 4]
        n = rng.randint(0, 8)
        head = [random_quotient(rng, p, 3) if j else Fraction(rng.randint(-(p - 1) // 2, (p - 1) // 2))
                for j in range(n + 1)]
        tail_a = [random_quotient(rng, p, 3) for _ in range(rng.randint(1, 4))]
        tail_b = [random_quotient(rng, p, 3) for _ in range(rng.randint(1, 4))]
        if tail_a[0] == tail_b[0]:
            tail_b[0] = tail_a[0] + (1 if abs(tail_a[0] + 1) < Fraction(p, 2) else -1)
        a, b = ce.fold(head + tail_a), ce.fold(head + tail_b)
        gap = ce.shared_prefix_gap(a, b, p, n)
        if not gap.holds:
            bad.append((p, n, a, b, gap))
    verdict(8, "shared-prefix gap", not bad, f"100 pairs, {len(bad)} failures")


def _dfs_palindromes(alphabet, max_len, bad):
    """Exhaustive words up to max_len; M_n extended one letter at a time."""
    one = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
    stack = [((), one)]
    count = 0
    while stack:
        w, M = stack.pop()
        if w:
            count += 1
            pal = w == w[::-1]
            if (M[0][1] == M[1][0]) != pal:
                bad.append(("sym", w))
        if len(w) < max_len:
            for b in alphabet:
                stack.append((w + (b,), fm.mat_mul(M, ((b, Fraction(1)), (Fraction(1), Fraction(0))))))
    return count


def test_criterion_09_palindromes(verdict):
    from padic_cf.cf_engine import convergents_of

    alphabet = (Fraction(1, 5), Fraction(2, 25), Fraction(-2, 25))
    bad = []
    count = _dfs_palindromes(alphabet, 10, bad)
    rng = random.Random(9)
    for _ in range(1500):
        n = rng.randint(11, 30)
        w = [rng.choice(alphabet) for _ in range(n)]
        if rng.random() < 0.5:
            w = w[: (n + 1) // 2] + w[: n // 2][::-1]
        rep = fm.palindrome_analysis(w, n, 5)
        t = convergents_of([0] + w, 5)
        if not rep.consistent or (rep.palindromic and t.A(n) != t.B(n - 1)):
            bad.append(("random", tuple(w)))
        count += 1
    # A_n = B_{n-1} on every palindrome up to length 10, via the plain recurrence
    for n in range(1, 11):
        for half in itertools.product(alphabet, repeat=(n + 1) // 2):
            w = half + half[: n // 2][::-1]
            t = convergents_of((0,) + w, 5)
            if t.A(n) != t.B(n - 1):
                bad.append(("A=B", w))
    tm = all(fm.is_palindrome(fm.gen_thue_morse((0, 1), 4**n)) for n in range(1, 7))
    verdict(9, "palindrome suite", not bad and tm, f"{count} words, {len(bad)} violations, Thue-Morse ok={tm}")


def test_criterion_10_counterexample_floor(verdict):
    rows = []
    for p in (3, 5, 7):
        x = Fraction(2, p)
        ce_ = check_floor_contract(x, FloorKind.COUNTEREXAMPLE, p).padic_contraction
        br = check_floor_contract(x, FloorKind.BROWKIN, p).padic_contraction
        rows.append((p, ce_, br))
    ok = all(not c and b for _, c, b in rows)
    verdict(10, "counterexample floor breaks contraction", ok,
            "; ".join(f"p={p}: counterexample {c}, browkin {b}" for p, c, b in rows))


def test_criterion_11_growth(verdict):
    rng = random.Random(11)
    bad = []
    for i in range(100):
        p = PRIMES[i % 4]
        b0 = Fraction(0) if i % 2 else floor(random_rational(rng), p).value
        qs = [b0] + [random_quotient(rng, p, 4) for _ in range(39)]
        g = ce.archimedean_growth_check(ce.convergents_of(qs, p))
        if not g.ok:
            bad.append((p, g.to_json()))
    verdict(11, "archimedean growth", not bad, f"100 expansions of 40 terms, {len(bad)} failures")
