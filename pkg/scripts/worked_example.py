"""Reproduce the p = 5 worked example: relation, heights and both bounds."""

from fractions import Fraction

from padic_cf.heights import PeriodicCF, check_h1_bound, check_h2_bound, check_remark_H, periodic_to_relation


def main():
    prefix = [Fraction(4, 25), Fraction(-3, 125)]
    cf = PeriodicCF(5, (Fraction(0), *prefix), (Fraction(1, 5),))
    rel = periodic_to_relation(cf)
    print("alpha =", cf.value())
    print("relation:", rel.polynomial_str(), f"(residual valuation >= {rel.residual_valuation})")
    h1 = check_h1_bound(cf)
    print(f"h1: h = {h1.naive_h} <= {h1.bound_value}: {h1.bound_holds}")
    h2 = check_h2_bound(prefix, 5)
    print(f"h2: h = {h2.naive_h} <= {h2.bound_value}: {h2.bound_holds}")
    print(f"    |B_2|^2 = {h2.details['B_k_inf_sq']:.6f} < 5/22: {h2.details['B_k_inf_sq_below']}")
    print(f"    |A_2|^2 = {h2.details['A_k_inf_sq']:.6f} < 5/22: {h2.details['A_k_inf_sq_below']}")
    r = check_remark_H(rel)
    print(f"H = {r.H:.6f}; H <= sqrt3 h: {r.upper_ok}; h <= 4 H: {r.lower_ok}; h <= 4 H^2: {r.lower_scaled_ok}")


if __name__ == "__main__":
    main()
