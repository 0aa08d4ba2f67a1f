#!/usr/bin/env python3
"""Amplitude ladders for the Duhamel smoothing estimate, one per family.

    python scripts/smoothing_ladders.py --out out/smoothing
"""
import argparse

import numpy as np

from _common import FAMILIES, out_dir, write_csv, write_json
from smallperiod.cli import SMOOTHING_DEFAULTS
from smallperiod.duhamel import smoothing_report
from smallperiod.evolution import SolverConfig
from smallperiod.spectrum import random_field


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="out/smoothing")
    ap.add_argument("--K", type=int, default=64)
    ap.add_argument("--dt", type=float, default=1e-3)
    ap.add_argument("--T", type=float, default=1.0)
    ap.add_argument("--decay", type=float, default=12.0)
    ap.add_argument("--top", type=float, default=1e-2)
    ap.add_argument("--rungs", type=int, default=7)
    ap.add_argument("--seventh-p", type=float, nargs="+", default=[2, 3, 4],
                    help="derivative gains to try for the seventh-order family")
    a = ap.parse_args()
    out = out_dir(a.out)
    ladder = list(a.top * np.logspace(0, -1, a.rungs))
    base = random_field(a.K, 1.0, a.decay, 0)
    cfg = SolverConfig(a.K, a.dt)
    reports, rows = {}, []
    for name, fam in FAMILIES.items():
        s, p, pt = SMOOTHING_DEFAULTS[name]
        for pp in (a.seventh_p if name == "seventh" else [p]):
            rep = smoothing_report(fam, s, pp, pt, 1, a.T, ladder, cfg, base)
            key = f"{name}_p{pp:g}"
            reports[key] = rep.to_dict()
            rows += [{"run": key, **r} for r in reports[key]["rows"]]
            print(f"{key:14s} exponent={rep.exponent:.4f}+-{rep.exponent_stderr:.1e} "
                  f"ratio spread={rep.ratio_spread:.4f}")
    write_json(out / "smoothing_reports.json", reports)
    write_csv(out / "smoothing_ladders.csv", rows)


if __name__ == "__main__":
    main()
