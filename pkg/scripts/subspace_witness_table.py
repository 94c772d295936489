"""delta_n for a 2-periodic quadratic number at its palindromic prefixes."""

import argparse
from fractions import Fraction

from padic_cf.exact_arith import parse_rat
from padic_cf.families import subspace_witness
from padic_cf.heights import PeriodicCF


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=5)
    ap.add_argument("--period", nargs=2, default=["1/5", "-2/25"])
    ap.add_argument("--n-max", type=int, default=41)
    args = ap.parse_args()
    period = tuple(parse_rat(x) for x in args.period)
    cf = PeriodicCF(args.p, (Fraction(0),), period)
    alpha = cf.value()
    bs = cf.quotients(args.n_max + 2)[1:]
    print("alpha =", alpha)
    print(f"{'n':>4} {'delta':>10} {'>15/8':>6} size(x,y,z)")
    for n in range(1, args.n_max + 1):
        w = subspace_witness(bs, n, args.p, alpha)
        if w.applicable:
            print(f"{n:>4} {float(w.delta):>10.5f} {str(w.exceeds_15_8):>6} {w.size_x},{w.size_y},{w.size_z}")


if __name__ == "__main__":
    main()
