"""Search small Hypothesis 1 prefixes for violations of h <= |B_k|_p^2."""

import argparse
import itertools
import json
from fractions import Fraction

from padic_cf.families import hypothesis1_check
from padic_cf.heights import check_h2_bound


def quotients(p: int, max_exp: int):
    for a in range(1, max_exp + 1):
        half = (p ** (a + 1) - 1) // 2
        for u in range(-half, half + 1):
            if u % p:
                yield Fraction(u, p**a)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=5)
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--max-exp", type=int, default=2)
    ap.add_argument("--limit", type=int, default=10)
    args = ap.parse_args()

    pool = list(quotients(args.p, args.max_exp))
    total = found = 0
    for prefix in itertools.product(pool, repeat=args.k):
        if not hypothesis1_check(prefix, args.p).passes:
            continue
        total += 1
        rep = check_h2_bound(prefix, args.p)
        if not rep.bound_holds:
            found += 1
            if found <= args.limit:
                print(json.dumps({"prefix": [str(b) for b in prefix], "h": str(rep.naive_h),
                                  "bound": str(rep.bound_value), "polynomial": rep.details["polynomial"]}))
    print(f"{found} of {total} Hypothesis 1 prefixes exceed the bound")


if __name__ == "__main__":
    main()
