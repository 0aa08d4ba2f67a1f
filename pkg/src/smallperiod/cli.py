"""Command-line experiments.

    smallperiod <subcommand> [--config FILE] [--out DIR] [--no-timestamp] [--threads N] [--key value ...]

Settings resolve as flags > config file (flat ``key = value`` lines) > defaults.
Reports go to ``--out``, else $SMALLPERIOD_OUT, else ./out.  Exit codes: 0 all
checked properties hold, 1 a property failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import csv
import datetime as _dt
import json
import os
import sys
from pathlib import Path

from . import __version__
from .duhamel import (check_identities, denominator_bounds, normalform_from_trajectory, quadrature_halving,
                      smoothing_report)
from .evolution import SolverConfig, SolverError, conserved_diagnostics, doubling_time_check, solve
from .families import FAMILY_NAMES, make_family
from .fixedpoint import DEFAULT_S, contraction_scan, distance_to_excluded, iterate_K, period_sweep
from .smalldivisor import DivisorError, build_excluded_set, certify_bound, sample_periods
from .spectrum import FieldError, FourierField, cosine_field, field_to_dict, load_field, random_field, sobolev_norm
from .symbols import SymbolError, parse_symbol, witness_for

OUT_ENV = "SMALLPERIOD_OUT"


class UsageError(Exception):
    pass


def _floatlist(text):
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    return [float(x) for x in str(text).replace(";", ",").split(",") if x.strip()]


def _bool(text):
    if isinstance(text, bool):
        return text
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


_FAMILY_KEYS = {"family": (str, "fifth"), "theta": (float, 0.5), "alpha": (float, 0.0), "omega": (float, 0.0)}
_SOLVER_KEYS = {"K": (int, 64), "dt": (float, 1e-3)}
_DATA_KEYS = {"data": (str, "random"), "amplitude": (float, 1e-2), "decay": (float, 12.0),
              "seed": (int, 0), "input": (str, "")}
_WINDOW_KEYS = {"t1": (float, 1.0), "t2": (float, 2.0), "p": (float, 1.5), "delta": (float, 0.1),
                "kmax": (int, 128)}

SCHEMAS = {
    "identities": {"kmax": (int, 500), "theta": (float, 0.5)},
    "divisor": {"symbol": (str, "fifth"), **{k: v for k, v in _FAMILY_KEYS.items() if k != "family"},
                **_WINDOW_KEYS, "samples": (int, 100), "seed": (int, 0), "list_kmax": (int, 4)},
    "simulate": {**_FAMILY_KEYS, **_SOLVER_KEYS, **_DATA_KEYS, "T": (float, 1.0), "stride": (int, 10),
                 "l2_tol": (float, 1e-8)},
    "duhamel": {**_FAMILY_KEYS, **_SOLVER_KEYS, **_DATA_KEYS, "T": (float, 1.0), "norm_s": (float, 4.0),
                "quadrature": (str, "filon"), "tol": (float, 1e-6)},
    "smoothing": {**_FAMILY_KEYS, **_SOLVER_KEYS, **{k: v for k, v in _DATA_KEYS.items() if k != "amplitude"},
                  "ladder": (_floatlist, [1e-2, 5e-3, 2.5e-3, 1.25e-3]), "T": (float, 1.0),
                  "s": (float, -1.0), "p": (float, -1.0), "p_tilde": (float, -1.0), "q": (float, 1.0),
                  "expect_exponent": (float, 2.0), "exponent_tol": (float, 0.1), "max_spread": (float, 2.0)},
    "contract": {**_FAMILY_KEYS, **_SOLVER_KEYS, **{k: v for k, v in _DATA_KEYS.items() if k != "amplitude"},
                 **_WINDOW_KEYS, "T": (float, 0.0), "sweep": (_bool, False), "count": (int, 20),
                 "ladder": (_floatlist, [1e-3, 5e-4, 2.5e-4, 1.25e-4]), "amplitude": (float, 1e-3),
                 "s": (float, -1.0), "n_iter": (int, 50)},
}

# (s, p, p_tilde) per family for the smoothing ladder
SMOOTHING_DEFAULTS = {"fifth": (6, 2, 0), "kawahara": (6, 2, 0), "seventh": (8, 4, 0), "kdv": (4, 2, 2)}


def _parse_config_file(path, schema):
    values = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    for i, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{i}: expected key = value")
        key, val = (x.strip() for x in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in schema:
            raise UsageError(f"{path}:{i}: unknown key {key!r}")
        values[key] = val
    return values


def resolve_config(sub: str, flags: dict, config_path: str | None) -> dict:
    schema = SCHEMAS[sub]
    merged = {k: d for k, (_, d) in schema.items()}
    if config_path:
        merged.update(_parse_config_file(config_path, schema))
    merged.update({k: v for k, v in flags.items() if v is not None})
    out = {}
    for k, (typ, _) in schema.items():
        try:
            out[k] = typ(merged[k])
        except (TypeError, ValueError) as exc:
            raise UsageError(f"bad value for {k}: {merged[k]!r} ({exc})") from None
    return out


ALIASES = {"T": ("--t",), "ladder": ("--amplitude-ladder",)}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="smallperiod", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sp = ap.add_subparsers(dest="sub", required=True)
    for name, schema in SCHEMAS.items():
        p = sp.add_parser(name)
        p.add_argument("--config", help="flat key = value file")
        p.add_argument("--out", help=f"output directory (default ${OUT_ENV} or ./out)")
        p.add_argument("--no-timestamp", action="store_true", help="omit the timestamp field from reports")
        p.add_argument("--threads", type=int, default=1, help="worker processes for sweeps")
        for key in schema:
            names = ["--" + key.replace("_", "-"), *ALIASES.get(key, ())]
            p.add_argument(*names, dest=key, default=None)
    return ap


# -- helpers ---------------------------------------------------------------------

def _family(c):
    return make_family(c["family"], theta=c["theta"], alpha=c["alpha"], omega=c["omega"])


def _initial_data(c, scale=None):
    K = c["K"]
    if c.get("input"):
        f = load_field(c["input"])
        if f.K != K:
            raise UsageError(f"field file has K={f.K}, config K={K}")
        return f if scale is None else scale * f
    a = c.get("amplitude", 1.0) if scale is None else scale
    if c["data"] == "random":
        return random_field(K, a, c["decay"], c["seed"])
    if c["data"] == "cosine":
        return cosine_field(K, a)
    raise UsageError(f"data must be 'random' or 'cosine', got {c['data']!r}")


def _solver(c, stride=10**9):
    return SolverConfig(K=c["K"], dt=c["dt"], snapshot_stride=stride)


def _write_json(path: Path, payload: dict):
    path.write_text(json.dumps(payload, indent=2, sort_keys=True, allow_nan=True) + "\n")


def _write_csv(path: Path, rows: list, header: list):
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([repr(r[h]) if isinstance(r[h], float) else r[h] for h in header])


# -- subcommands -------------------------------------------------------------------

def cmd_identities(c, ctx):
    idr = check_identities(c["kmax"])
    den = denominator_bounds(c["kmax"], c["theta"])
    ok = idr.passed and den.all_passed
    return ok, {"identities": {"pairs": idr.pairs, "failures": idr.failures,
                               "sums_of_squares_ok": idr.sums_of_squares_ok},
                "denominators": {"maxima": den.maxima, "bounds": den.bounds, "passed": den.passed}}, {}


def _symbol_and_witness(c):
    name = c["symbol"].strip().lower()
    if name in FAMILY_NAMES:
        fam = make_family(name, theta=c["theta"], alpha=c["alpha"], omega=c["omega"])
        return fam.linear, fam.witness()
    A = parse_symbol(c["symbol"])
    return A, witness_for(A)


def cmd_divisor(c, ctx):
    A, w = _symbol_and_witness(c)
    S = build_excluded_set(A, w, c["t1"], c["t2"], c["p"], c["delta"], c["kmax"])
    Ts = sample_periods(S, c["samples"], c["seed"])
    reps = [certify_bound(A, S, T) for T in Ts]
    rows = [{"T": r.T, "max_ratio": r.max_ratio, "argmax_k": r.argmax_k, "passed": int(r.passed)} for r in reps]
    ok = all(r.passed for r in reps) and S.removed_measure <= S.delta
    payload = {**S.summary(), "failures": sum(not r.passed for r in reps), "samples": len(reps),
               "intervals": [dict(zip(("k", "n", "center", "radius"), iv)) for iv in S.intervals(c["list_kmax"])]}
    return ok, payload, {"periods": (rows, ["T", "max_ratio", "argmax_k", "passed"])}


def cmd_simulate(c, ctx):
    fam = _family(c)
    u0 = _initial_data(c)
    traj = solve(u0, fam, c["T"], _solver(c, c["stride"]))
    rows = conserved_diagnostics(traj)
    drift = abs(rows[-1]["l2"] - rows[0]["l2"]) / rows[0]["l2"] if rows[0]["l2"] else 0.0
    dbl = doubling_time_check(traj, u0, 6)
    ok = drift <= c["l2_tol"] and all(r["mean"] == 0 for r in rows)
    snaps = [{"t": float(t), "field": field_to_dict(traj.u_field(i))} for i, t in enumerate(traj.times)]
    payload = {"l2_relative_drift": drift, "doubling": dbl.__dict__, "n_steps": traj.n_steps,
               "final_field": field_to_dict(traj.final()), "snapshots": snaps}
    return ok, payload, {"diagnostics": (rows, ["t", "mean", "l2", "h6", "energy"])}


def cmd_duhamel(c, ctx):
    fam = _family(c)
    u0 = _initial_data(c)
    traj = solve(u0, fam, c["T"], _solver(c, 1))
    direct = FourierField.from_half(traj.duhamel_half())
    nf = FourierField.from_half(normalform_from_trajectory(traj, c["quadrature"]))
    s = c["norm_s"]
    ref = sobolev_norm(direct, s)
    rel = sobolev_norm(nf - direct, s) / ref if ref else sobolev_norm(nf, s)
    rows = [{"k": k, "direct_re": direct[k].real, "direct_im": direct[k].imag,
             "normalform_re": nf[k].real, "normalform_im": nf[k].imag} for k in range(1, u0.K + 1)]
    halving = quadrature_halving(traj, c["quadrature"])
    return rel <= c["tol"], {"relative_difference": rel, "norm_direct": ref, "quadrature_halving": halving}, \
        {"modes": (rows, ["k", "direct_re", "direct_im", "normalform_re", "normalform_im"])}


def cmd_smoothing(c, ctx):
    fam = _family(c)
    s0, p0, pt0 = SMOOTHING_DEFAULTS[fam.name]
    s = s0 if c["s"] < 0 else c["s"]
    p = p0 if c["p"] < 0 else c["p"]
    pt = pt0 if c["p_tilde"] < 0 else c["p_tilde"]
    base = _initial_data(c, scale=1.0)
    rep = smoothing_report(fam, s, p, pt, c["q"], c["T"], c["ladder"], _solver(c), base)
    ok = (rep.error is None and abs(rep.exponent - c["expect_exponent"]) <= c["exponent_tol"]
          and rep.ratio_spread < c["max_spread"])
    d = rep.to_dict()
    return ok, d, {"ladder": (d["rows"], ["amplitude", "norm_s", "norm_s_pt", "sd_norm", "ratio"])}


def cmd_contract(c, ctx):
    fam = _family(c)
    s = DEFAULT_S[fam.name] if c["s"] < 0 else c["s"]
    S = build_excluded_set(fam.linear, fam.witness(), c["t1"], c["t2"], c["p"], c["delta"], c["kmax"])
    base = _initial_data(c, scale=1.0)
    cfg = _solver(c)
    T = c["T"] if c["T"] > 0 else sample_periods(S, 1, c["seed"])[0]
    rep = contraction_scan(fam, T, S, c["ladder"], s, cfg, base)
    it = iterate_K(c["amplitude"] * base, fam, T, S, c["n_iter"], cfg, s)
    rep.iteration = it.norms
    d = rep.to_dict()
    d["divisor"] = S.summary()
    d["nearest_excluded"] = dict(zip(("k", "distance"), distance_to_excluded(S, T)))
    d["iteration_converged"] = it.converged
    ok = it.converged and all(r["factor"] < 1 for r in d["rows"])
    tables = {"ladder": (d["rows"], ["amplitude", "norm_u0", "norm_Ku0", "factor"])}
    if c["sweep"]:
        rows = period_sweep(fam, S, c["count"], c["amplitude"], s, cfg, c["seed"], base,
                            workers=ctx["threads"])
        ok = ok and all(r["factor"] < 1 for r in rows)
        d["sweep_contracting"] = sum(r["factor"] < 1 for r in rows)
        d["sweep_count"] = len(rows)
        tables["sweep"] = (rows, ["T", "factor", "nearest_k", "distance"])
    return ok, d, tables


COMMANDS = {"identities": cmd_identities, "divisor": cmd_divisor, "simulate": cmd_simulate,
            "duhamel": cmd_duhamel, "smoothing": cmd_smoothing, "contract": cmd_contract}


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    sub = args.sub
    flags = {k: getattr(args, k) for k in SCHEMAS[sub]}
    try:
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        cfg = resolve_config(sub, flags, args.config)
        out = Path(args.out or os.environ.get(OUT_ENV) or "out")
        out.mkdir(parents=True, exist_ok=True)
        ok, payload, tables = COMMANDS[sub](cfg, {"threads": args.threads})
    except (UsageError, SymbolError, FieldError, DivisorError, ValueError) as exc:
        print(f"smallperiod {sub}: error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"smallperiod {sub}: solver failure: {exc}", file=sys.stderr)
        return 1
    report = {"subcommand": sub, "version": __version__, "config": cfg, "passed": bool(ok), **payload}
    if not args.no_timestamp:
        report["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat()
    _write_json(out / f"{sub}.json", report)
    for name, (rows, header) in tables.items():
        _write_csv(out / f"{sub}_{name}.csv", rows, header)
    print(f"{sub}: {'PASS' if ok else 'FAIL'} -> {out / (sub + '.json')}")
    return 0 if ok else 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
