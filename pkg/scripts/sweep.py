"""Default invariant sweep: p in {3, 5, 7, 11}, 200 rationals each."""

import json
import sys

from padic_cf.cli import SUITES, run_sweep


def main():
    report = run_sweep([3, 5, 7, 11], 200, [s for s in SUITES if s != "floor"], seed=0)
    for p, cell in report["matrix"].items():
        print(p, json.dumps(cell, sort_keys=True))
    print("ok" if report["ok"] else "violations found")
    return 0 if report["ok"] else 2


if __name__ == "__main__":
    sys.exit(main())
