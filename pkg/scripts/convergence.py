#!/usr/bin/env python3
"""Time-step study: Richardson order of the solver and normal-form/direct agreement versus dt.

    python scripts/convergence.py --out out/convergence
"""
import argparse
import math

from _common import FAMILIES, out_dir, write_csv
from smallperiod.duhamel import duhamel_direct, duhamel_normalform
from smallperiod.evolution import SolverConfig, solve
from smallperiod.spectrum import cosine_field, sobolev_norm


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="out/convergence")
    ap.add_argument("--K", type=int, default=64)
    ap.add_argument("--T", type=float, default=1.0)
    ap.add_argument("--amplitude", type=float, default=1e-2)
    ap.add_argument("--dts", type=float, nargs="+", default=[2e-2, 1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4])
    a = ap.parse_args()
    out = out_dir(a.out)
    u0 = cosine_field(a.K, a.amplitude)
    order_rows, nf_rows = [], []
    for name, fam in FAMILIES.items():
        finals = {}
        for dt in a.dts:
            try:
                finals[dt] = solve(u0, fam, a.T, SolverConfig(a.K, dt, snapshot_stride=10**9)).final()
            except Exception as exc:  # noqa: BLE001 - record and continue the sweep
                print(f"{name} dt={dt}: {exc}")
        dts = [d for d in a.dts if d in finals]
        for d0, d1, d2 in zip(dts, dts[1:], dts[2:]):
            e1 = sobolev_norm(finals[d0] - finals[d1], 0)
            e2 = sobolev_norm(finals[d1] - finals[d2], 0)
            order = math.log(e1 / e2) / math.log(d0 / d1) if e1 > 0 and e2 > 0 else float("nan")
            order_rows.append({"family": name, "dt": d0, "diff_coarse": e1, "diff_fine": e2, "order": order})
            print(f"{name:9s} dt={d0:<8g} order={order:.3f}")
        for dt in a.dts[1:]:
            cfg = SolverConfig(a.K, dt)
            nf, d = duhamel_normalform(u0, fam, a.T, cfg), duhamel_direct(u0, fam, a.T, cfg)
            nf_rows.append({"family": name, "dt": dt,
                            "rel_H4": sobolev_norm(nf - d, 4) / sobolev_norm(d, 4)})
    write_csv(out / "richardson.csv", order_rows)
    write_csv(out / "normalform_vs_direct.csv", nf_rows)


if __name__ == "__main__":
    main()
