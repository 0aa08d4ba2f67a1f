#!/usr/bin/env python3
"""Excluded-period sets for each family: constants, nested-union table and endpoint sharpness.

    python scripts/divisor_tables.py --out out/divisor
"""
import argparse

from _common import FAMILIES, out_dir, write_csv, write_json
from smallperiod.smalldivisor import build_excluded_set, certify_bound, nested_union_measure, sample_periods
from smallperiod.symbols import inverse_factor_magnitude


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="out/divisor")
    ap.add_argument("--kmax", type=int, default=128)
    ap.add_argument("--p", type=float, default=1.5)
    ap.add_argument("--delta", type=float, default=0.1)
    ap.add_argument("--samples", type=int, default=100)
    ap.add_argument("--levels", type=int, default=10)
    a = ap.parse_args()
    out = out_dir(a.out)
    summary, nested, sharp = {}, [], []
    for name, fam in FAMILIES.items():
        w = fam.witness()
        S = build_excluded_set(fam.linear, w, 1.0, 2.0, a.p, a.delta, a.kmax)
        Ts = sample_periods(S, a.samples, 0)
        worst = max(certify_bound(fam.linear, S, T).max_ratio for T in Ts)
        summary[name] = {**S.summary(), "samples": len(Ts), "worst_bound_ratio": worst}
        for row in nested_union_measure(fam.linear, w, 1.0, 2.0, a.p, a.kmax, a.levels):
            nested.append({"family": name, **row})
        for k, n, c, r in S.intervals(4):
            for side, T in (("left", c - r), ("right", c + r)):
                ratio = inverse_factor_magnitude(fam.linear, T, k) / (S.c1 * k ** S.p)
                sharp.append({"family": name, "k": k, "n": n, "side": side, "T": T, "ratio": ratio})
        print(f"{name:9s} c0={S.c0:.4g} c1={S.c1:.4g} removed={S.removed_measure:.4g} "
              f"tail={S.uncertified_tail:.4g} worst ratio over {len(Ts)} samples={worst:.3g}")
    write_json(out / "divisor_summary.json", summary)
    write_csv(out / "nested_union.csv", nested)
    write_csv(out / "endpoint_ratios.csv", sharp)


if __name__ == "__main__":
    main()
