"""padic-cf command line.

Exit codes: 0 success, 2 an audited invariant failed (the offending datum is
printed), 1 usage, parse, precision or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import cf_engine, families, heights
from .errors import PadicCFError
from .exact_arith import PAdicUnitFrac, check_prime, format_value, parse_rat, parse_value
from .floors import FloorKind, check_floor_contract
from .sampling import random_rational

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    p: int
    precision: int = 256
    max_steps: int = cf_engine.DEFAULT_MAX_STEPS
    seed: int = 0
    output: str = "human"

    def __post_init__(self):
        check_prime(self.p)
        if self.precision < 8:
            raise ValueError("precision must be >= 8")
        if self.output not in ("json", "csv", "human"):
            raise ValueError(f"unknown output format {self.output!r}")


class UsageError(Exception):
    pass


def _config(args) -> RunConfig:
    if args.p is None:
        raise UsageError("--p is required")
    output = "json" if args.json else "csv" if args.csv else "human"
    return RunConfig(args.p, args.precision, args.max_steps, args.seed, output)


def _emit(cfg: RunConfig, payload: dict, human: str, rows: list[dict] | None = None, out=None):
    out = out or sys.stdout
    if cfg.output == "json":
        out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    elif cfg.output == "csv" and rows is not None:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0].keys()) if rows else ["empty"], lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        out.write(buf.getvalue())
    else:
        out.write(human.rstrip("\n") + "\n")


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _value(args, cfg: RunConfig):
    if args.value is None:
        raise UsageError("--value is required")
    return parse_value(args.value, cfg.p, getattr(args, "branch", "+"))


# --------------------------------------------------------------------------
# Commands


def cmd_expand(args) -> int:
    cfg = _config(args)
    x = _value(args, cfg)
    cf = cf_engine.expand(x, cfg.p, max_steps=cfg.max_steps, detect_period=not args.no_period,
                          kind=args.kind, budget=cfg.precision)
    rows = [{"n": i, "quotient": str(b), "u": b.u, "a": b.a} for i, b in enumerate(cf.quotients)]
    _emit(cfg, cf.to_json(), cf.human(), rows)
    return EXIT_OK


def cmd_euclid(args) -> int:
    cfg = _config(args)
    if args.x is None or args.y is None:
        raise UsageError("--x and --y are required")
    steps = cf_engine.euclid_algorithm(parse_rat(args.x), parse_rat(args.y), cfg.p, cfg.max_steps)
    quotients = [str(s.q) for s in steps]
    payload = {"schema": 1, "p": cfg.p, "steps": [s.to_json() for s in steps], "quotients": quotients}
    human = "\n".join(f"{format_value(s.x)} = ({s.q}) * {format_value(s.y)} "
                      f"+ {format_value(s.r)}" for s in steps)
    human += f"\nquotients: [{', '.join(quotients)}]"
    rows = [{"n": i, **{k: str(v) for k, v in s.to_json().items()}} for i, s in enumerate(steps)]
    _emit(cfg, payload, human, rows)
    return EXIT_OK


def _expansion_from_args(args, cfg: RunConfig) -> cf_engine.CFExpansion:
    if getattr(args, "cf", None):
        return cf_engine.CFExpansion.from_json(_read_json(args.cf))
    return cf_engine.expand(_value(args, cfg), cfg.p, max_steps=cfg.max_steps, budget=cfg.precision)


def cmd_convergents(args) -> int:
    cfg = _config(args)
    cf = _expansion_from_args(args, cfg)
    table = cf_engine.convergents(cf, args.n)
    rows = [{"n": n, "A": str(A), "B": str(B), "e": str(e), "f": str(f)} for n, A, B, e, f in table.rows()]
    payload = {"schema": 1, "p": cfg.p, "rows": rows}
    human = "\n".join(f"n={r['n']:>3}  A={r['A']}  B={r['B']}  v(A)={r['e']}  v(B)={r['f']}" for r in rows)
    _emit(cfg, payload, human, rows)
    return EXIT_OK


def cmd_floor(args) -> int:
    cfg = _config(args)
    x = _value(args, cfg)
    rep = check_floor_contract(x, args.kind, cfg.p, cfg.precision)
    payload = {"schema": 1, "p": cfg.p, "kind": FloorKind(args.kind).value, "value": format_value(x),
               **rep.to_json()}
    human = (f"s({format_value(x)}) = {rep.value}  [S-integer: {rep.in_S_integers}, "
             f"|s|<p/2: {rep.archimedean_bound}, |x-s|_p<1: {rep.padic_contraction}]")
    _emit(cfg, payload, human, [payload])
    return EXIT_OK


def _periodic_from_file(path: str, p: int) -> heights.PeriodicCF:
    obj = _read_json(path)
    obj.setdefault("p", p)
    if int(obj["p"]) != p:
        raise UsageError(f"file is for p={obj['p']}, not p={p}")
    return heights.PeriodicCF.from_json(obj)


def cmd_height(args) -> int:
    cfg = _config(args)
    if not args.cf:
        raise UsageError("--cf FILE.json is required")
    pcf = _periodic_from_file(args.cf, cfg.p)
    if args.check == "h1":
        rep = heights.check_h1_bound(pcf)
        ok = rep.bound_holds
    elif args.check == "h2":
        if pcf.period != (Fraction(1, cfg.p),) or not pcf.lemma_shape:
            raise UsageError("h2 needs [0, b_1..b_k, overline(1/p)]")
        rep = heights.check_h2_bound(pcf.preperiod[1:], cfg.p)
        ok = rep.bound_holds and rep.details["B_k_inf_sq_below"] and rep.details["A_k_inf_sq_below"]
    else:
        rel = heights.periodic_to_relation(pcf)
        r = heights.check_remark_H(rel)
        payload = {"schema": 1, "check": "remark", "polynomial": rel.polynomial_str(), **r.to_json()}
        human = (f"h = {r.h}, H = {r.H:.12g}, H <= sqrt(D+1) h: {r.upper_ok}, h <= 2^D H: {r.lower_ok}, "
                 f"{'PASS' if r.ok else 'FAIL'}\n"
                 f"with H^D in place of H: {r.upper_scaled_ok}, {r.lower_scaled_ok}")
        _emit(cfg, payload, human, [payload])
        return EXIT_OK if r.ok else EXIT_VIOLATION
    payload = rep.to_json()
    human = (f"polynomial: {rep.details['polynomial']}\n"
             f"h = {rep.naive_h}, bound = {rep.bound_value}, H = {rep.weil_H:.12g}, "
             f"{'PASS' if rep.bound_holds else 'FAIL'}")
    if args.check == "h2":
        human += (f"\n|B_k|^2 < p/(4p+2): {rep.details['B_k_inf_sq_below']}, "
                  f"|A_k|^2 < p/(4p+2): {rep.details['A_k_inf_sq_below']}")
    _emit(cfg, payload, human, [{k: v for k, v in payload.items() if not isinstance(v, (dict, list))}])
    return EXIT_OK if ok else EXIT_VIOLATION


def _letters(spec: dict, p: int) -> tuple:
    a = parse_rat(str(spec.get("a", f"1/{p}")))
    b = parse_rat(str(spec.get("b", f"-1/{p}")))
    return a, b


def cmd_family(args) -> int:
    cfg = _config(args)
    spec = _read_json(args.spec) if args.spec else {}
    spec.setdefault("p", cfg.p)
    spec.setdefault("seed", cfg.seed)
    if args.family in ("qper", "ooto"):
        cls = families.QPerSpec if args.family == "qper" else families.OotoSpec
        fam = cls.from_json(spec)
        result = (families.gen_qper if args.family == "qper" else families.gen_ooto)(fam, args.length)
        payload = result.to_json()
        if not args.emit_certificate:
            payload.pop("certificate")
        seq = result.sequence
        ok = result.certificate["all_pass"]
    else:
        a, b = _letters(spec, cfg.p)
        if args.family == "sturmian":
            theta = parse_value(spec.get("theta", "(3 - 1*sqrt(5))/2"))
            seq = families.gen_sturmian(families.SturmianSlope(theta, a, b), args.length)
        else:
            seq = families.gen_thue_morse((a, b), args.length)
        payload = {"schema": 1, "family": args.family, "p": cfg.p, "sequence": [str(x) for x in seq]}
        ok = True
    human = " ".join(str(PAdicUnitFrac.of(x, cfg.p)) for x in seq)
    if args.emit_certificate and "certificate" in payload:
        human += "\n" + "\n".join(f"{'PASS' if e['pass'] else 'FAIL'}  {e['hypothesis']}"
                                  for e in payload["certificate"]["hypotheses"])
    rows = [{"n": i + 1, "quotient": str(x)} for i, x in enumerate(seq)]
    _emit(cfg, payload, human, rows)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_audit(args) -> int:
    cfg = _config(args)
    cf = _expansion_from_args(args, cfg)
    table = cf_engine.convergents(cf)
    laws = cf_engine.check_valuation_laws(table, cf, budget=cfg.precision)
    det_bad = [n for n in range(0, table.last + 1) if table.determinant(n) != (-1) ** (n + 1)]
    growth = cf_engine.archimedean_growth_check(table) if table.last >= 1 else None
    ok = laws.ok and not det_bad and (growth is None or growth.ok)
    payload = {"schema": 1, "p": cfg.p, "laws": laws.to_json(), "determinant_failures": det_bad,
               "growth": growth.to_json() if growth else None, "ok": ok}
    lines = [f"valuation laws: {'PASS' if laws.ok else 'FAIL'} {laws.checked}",
             f"determinant: {'PASS' if not det_bad else 'FAIL ' + str(det_bad)}",
             f"growth: {'n/a' if growth is None else ('PASS' if growth.ok else 'FAIL')}"]
    lines += [f"violation: law {law} at n={n}: {d}" for law, n, d in laws.violations]
    _emit(cfg, payload, "\n".join(lines), [{"check": "laws", "ok": laws.ok},
                                           {"check": "determinant", "ok": not det_bad},
                                           {"check": "growth", "ok": growth is None or growth.ok}])
    return EXIT_OK if ok else EXIT_VIOLATION


# --------------------------------------------------------------------------
# Sweep

SUITES = ("termination", "laws", "determinant", "growth", "floor")


def run_sweep(primes, samples: int, suites, kind: str = "browkin", seed: int = 0,
              bound: int = 10**6, max_steps: int = cf_engine.DEFAULT_MAX_STEPS) -> dict:
    """Pass/fail matrix {p: {suite: {"pass": n, "fail": n}}} with counterexamples verbatim."""
    rng = random.Random(seed)
    matrix: dict = {}
    counterexamples: list[dict] = []
    for p in primes:
        cell = {s: {"pass": 0, "fail": 0} for s in suites}
        for _ in range(samples):
            x = random_rational(rng, bound)

            def mark(suite, good, detail=""):
                cell[suite]["pass" if good else "fail"] += 1
                if not good:
                    counterexamples.append({"p": p, "suite": suite, "x": format_value(x), "detail": detail})

            if "floor" in suites:
                c = check_floor_contract(x, kind, p)
                mark("floor", c.all_hold, json.dumps(c.to_json(), sort_keys=True))
            cf = cf_engine.expand(x, p, max_steps=max_steps, kind=kind)
            if "termination" in suites:
                good = cf.status == cf_engine.FINITE and cf_engine.fold(cf.values) == x
                mark("termination", good, cf.status)
            table = cf_engine.convergents(cf)
            if "laws" in suites:
                rep = cf_engine.check_valuation_laws(table, cf)
                mark("laws", rep.ok, json.dumps(rep.to_json()["violations"][:3]))
            if "determinant" in suites:
                bad = [n for n in range(0, table.last + 1) if table.determinant(n) != (-1) ** (n + 1)]
                mark("determinant", not bad, str(bad))
            if "growth" in suites and table.last >= 1:
                g = cf_engine.archimedean_growth_check(table)
                mark("growth", g.ok, json.dumps(g.to_json()))
        matrix[str(p)] = cell
    ok = not counterexamples
    return {"schema": 1, "kind": kind, "seed": seed, "samples": samples, "primes": list(primes),
            "suites": list(suites), "matrix": matrix, "counterexamples": counterexamples, "ok": ok}


def cmd_sweep(args) -> int:
    if args.spec:
        spec = _read_json(args.spec)
    else:
        spec = {"primes": [int(x) for x in args.primes.split(",") if x.strip()],
                "samples": args.samples, "suites": [s for s in args.suites.split(",") if s.strip()]}
    primes = [int(p) for p in spec.get("primes", [])]
    suites = list(spec.get("suites", []))
    samples = int(spec.get("samples", 0))
    if not primes or not suites or samples <= 0:
        raise UsageError("empty sweep: need primes, suites and a positive sample count")
    unknown = set(suites) - set(SUITES)
    if unknown:
        raise UsageError(f"unknown suites: {sorted(unknown)}")
    for p in primes:
        check_prime(p)
    kind = spec.get("kind", args.kind)
    report = run_sweep(primes, samples, suites, kind, int(spec.get("seed", args.seed)),
                       int(spec.get("bound", 10**6)), args.max_steps)
    cfg = RunConfig(primes[0], args.precision, args.max_steps, args.seed,
                    "json" if args.json else "csv" if args.csv else "human")
    rows = [{"p": p, "suite": s, **c} for p, cell in report["matrix"].items() for s, c in cell.items()]
    human = "\n".join(f"p={r['p']:>3} {r['suite']:<12} pass={r['pass']} fail={r['fail']}" for r in rows)
    for c in report["counterexamples"][:20]:
        human += f"\ncounterexample: {json.dumps(c, sort_keys=True)}"
    _emit(cfg, report, human, rows)
    return EXIT_OK if report["ok"] else EXIT_VIOLATION


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, help="odd prime")
    common.add_argument("--precision", type=int,
                        default=int(os.environ.get("PADIC_CF_PRECISION", 256)), help="p-adic digit budget")
    common.add_argument("--max-steps", type=int, default=cf_engine.DEFAULT_MAX_STEPS)
    common.add_argument("--seed", type=int, default=0)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")

    parser = argparse.ArgumentParser(prog="padic-cf", description="Browkin p-adic continued fractions")
    sub = parser.add_subparsers(dest="command", required=True)
    kinds = [k.value for k in FloorKind]

    p = sub.add_parser("expand", parents=[common], help="partial quotients of a value")
    p.add_argument("--value", help="'num/den' or '(P + Q*sqrt(D))/R'")
    p.add_argument("--kind", choices=kinds, default="browkin")
    p.add_argument("--branch", choices=["+", "-"], default="+")
    p.add_argument("--no-period", action="store_true", help="disable period detection")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("euclid", parents=[common], help="p-adic Euclidean algorithm on x, y")
    p.add_argument("--x")
    p.add_argument("--y")
    p.set_defaults(func=cmd_euclid)

    p = sub.add_parser("convergents", parents=[common], help="A_n, B_n and their valuations")
    p.add_argument("--value")
    p.add_argument("--branch", choices=["+", "-"], default="+")
    p.add_argument("--cf", help="expansion JSON produced by 'expand --json'")
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_convergents)

    p = sub.add_parser("floor", parents=[common], help="floor value and its contract")
    p.add_argument("--value")
    p.add_argument("--kind", choices=kinds, default="browkin")
    p.add_argument("--branch", choices=["+", "-"], default="+")
    p.set_defaults(func=cmd_floor)

    p = sub.add_parser("height", parents=[common], help="height audits for periodic fractions")
    p.add_argument("--cf", help='JSON {"p", "preperiod": [...], "period": [...]}')
    p.add_argument("--check", choices=["h1", "h2", "remark"], default="h1")
    p.set_defaults(func=cmd_height)

    p = sub.add_parser("family", parents=[common], help="generate partial-quotient families")
    p.add_argument("family", choices=["qper", "ooto", "sturmian", "thue-morse"])
    p.add_argument("--length", type=int, default=50)
    p.add_argument("--spec", help="family spec JSON")
    p.add_argument("--emit-certificate", action="store_true")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("audit", parents=[common], help="valuation laws, determinant and growth")
    p.add_argument("--value")
    p.add_argument("--branch", choices=["+", "-"], default="+")
    p.add_argument("--cf", help="expansion JSON")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("sweep", parents=[common], help="batch invariant sweep")
    p.add_argument("--spec", help="sweep spec JSON")
    p.add_argument("--primes", default="3,5,7,11")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--suites", default="termination,laws,determinant,growth")
    p.add_argument("--kind", choices=kinds, default="browkin")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error[E_USAGE]: {exc}", file=sys.stderr)
    except PadicCFError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error[E_INPUT]: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
