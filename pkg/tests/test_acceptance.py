"""Acceptance criteria 1-10.

Each test records one ``criterion N: PASS|FAIL ...`` line (printed in the
terminal summary) before asserting, so a failing criterion still reports its
measured numbers.
"""
import math
import time

import pytest

from smallperiod.cli import run
from smallperiod.duhamel import (check_identities, compute_B, compute_R, denominator_bounds, duhamel_direct,
                                 duhamel_normalform, loglog_fit, smoothing_report)
from smallperiod.evolution import SolverConfig, conserved_diagnostics, solve
from smallperiod.families import fifth, kawahara, kdv, seventh
from smallperiod.fixedpoint import DEFAULT_S, contraction_factor, contraction_scan, iterate_K
from smallperiod.smalldivisor import build_excluded_set, certify_bound, sample_periods
from smallperiod.spectrum import cosine_field, random_field, sobolev_norm
from smallperiod.symbols import apply_inverse_factor, apply_linear, apply_one_minus_linear

FAMILIES = {"fifth": fifth(), "kawahara": kawahara(0.5), "seventh": seventh(), "kdv": kdv()}
WINDOW = dict(T1=1.0, T2=2.0, p=1.5, delta=0.1, k_max=128)


def verdict(record, n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}"
    print(line)
    record("criterion", line)
    assert ok, line


@pytest.fixture(scope="module")
def excluded_sets():
    return {name: build_excluded_set(f.linear, f.witness(), **WINDOW) for name, f in FAMILIES.items()}


def test_criterion_01_phase_identities(record_property):
    t0 = time.perf_counter()
    rep = check_identities(500)
    dt = time.perf_counter() - t0
    verdict(record_property, 1, rep.passed and dt < 5.0,
            f"pairs={rep.pairs} failures={rep.failures} runtime={dt:.2f}s")


def test_criterion_02_denominator_bounds(record_property):
    rep = denominator_bounds(500, 0.5)
    detail = " ".join(f"{k}<={rep.bounds[k]}:{rep.maxima[k]:.4g}" for k in rep.maxima)
    verdict(record_property, 2, rep.all_passed, detail)


def test_criterion_03_small_divisors(record_property, excluded_sets):
    parts, ok = [], True
    for name, S in excluded_sets.items():
        Ts = sample_periods(S, 100, seed=0)
        fails = sum(not certify_bound(S.symbol, S, T).passed for T in Ts)
        good = S.removed_measure <= S.delta and fails == 0 and S.uncertified_tail < 0.01 and len(Ts) == 100
        ok &= good
        parts.append(f"{name}: removed={S.removed_measure:.3g} tail={S.uncertified_tail:.3g} "
                     f"fails={fails}/100 c1={S.c1:.4g}")
    verdict(record_property, 3, ok, "; ".join(parts))


def test_criterion_04_inverse_round_trip(record_property, excluded_sets):
    S = excluded_sets["fifth"]
    Ts = sample_periods(S, 20, seed=4)
    worst = 0.0
    for seed, T in enumerate(Ts):
        f = random_field(64, 1.0, 0.0, seed)
        back = apply_inverse_factor(S.symbol, T, apply_one_minus_linear(S.symbol, T, f))
        worst = max(worst, sobolev_norm(back - f, 0) / sobolev_norm(f, 0))
    verdict(record_property, 4, worst <= 1e-12, f"max relative error over 20 seeds={worst:.2e}")


def _richardson_order(fam, h0):
    u0 = cosine_field(64, 1e-2)
    f = [solve(u0, fam, 1.0, SolverConfig(64, h0 / 2**i, snapshot_stride=10**9)).final() for i in range(3)]
    return math.log2(sobolev_norm(f[0] - f[1], 0) / sobolev_norm(f[1] - f[2], 0))


def test_criterion_05_solver_validation(record_property):
    parts, ok = [], True
    for name, fam in FAMILIES.items():
        u0 = random_field(64, 1e-2, 4.0, 1)
        lin = solve(u0, fam.linear_only(), 1.0, SolverConfig(64, 1e-3)).final()
        ref = apply_linear(fam.linear, 1.0, u0)
        lin_err = sobolev_norm(lin - ref, 0) / sobolev_norm(ref, 0)
        rows = conserved_diagnostics(solve(u0, fam, 1.0, SolverConfig(64, 1e-3, snapshot_stride=50)))
        mean = max(r["mean"] for r in rows)
        l2 = max(abs(r["l2"] - rows[0]["l2"]) for r in rows) / rows[0]["l2"]
        # seventh order needs a finer base step before its k = 3 phase is asymptotic
        order = _richardson_order(fam, 1e-3 if name == "seventh" else 1e-2)
        good = lin_err <= 1e-12 and 3.7 <= order <= 4.3 and mean <= 1e-14 and l2 <= 1e-8
        ok &= good
        parts.append(f"{name}: linear={lin_err:.1e} order={order:.2f} mean={mean:.0e} l2drift={l2:.1e}")
    verdict(record_property, 5, ok, "; ".join(parts))


def test_criterion_06_normal_form_equivalence(record_property):
    parts, ok = [], True
    for name, fam in FAMILIES.items():
        t0 = time.perf_counter()
        u0, cfg = cosine_field(64, 1e-2), SolverConfig(64, 1e-3)
        nf, d = duhamel_normalform(u0, fam, 1.0, cfg), duhamel_direct(u0, fam, 1.0, cfg)
        err = sobolev_norm(nf - d, 4) / sobolev_norm(d, 4)
        el = time.perf_counter() - t0
        ok &= err <= 1e-6 and el < 300
        parts.append(f"{name}: relH4={err:.2e} ({el:.1f}s)")
    verdict(record_property, 6, ok, "; ".join(parts))


DECADE = [1e-2, 10 ** -2.333, 10 ** -2.667, 1e-3]


def test_criterion_07_smoothing(record_property):
    base = random_field(64, 1.0, 12.0, 0)
    cfg = SolverConfig(64, 1e-3)
    parts, ok = [], True
    for name, (s, p, pt, check_exp) in {"fifth": (6, 2, 0, True), "kawahara": (6, 2, 0, True),
                                        "seventh": (8, 4, 0, True), "kdv": (4, 2, 2, False)}.items():
        rep = smoothing_report(FAMILIES[name], s, p, pt, 1, 1.0, DECADE, cfg, base)
        good = rep.error is None and rep.ratio_spread < 2
        if check_exp:
            good &= abs(rep.exponent - 2.0) <= 0.1
        ok &= good
        parts.append(f"{name}(s={s},p={p},pt={pt}): exponent={rep.exponent:.4f} spread={rep.ratio_spread:.4f}")
    verdict(record_property, 7, ok, "; ".join(parts))


def test_criterion_08_contraction(record_property, excluded_sets):
    base = random_field(64, 1.0, 12.0, 0)
    cfg = SolverConfig(64, 1e-3)
    parts, ok = [], True
    for name, fam in FAMILIES.items():
        S, s = excluded_sets[name], DEFAULT_S[name]
        Ts = sample_periods(S, 20, seed=8)
        factors = [contraction_factor(1e-3 * base, fam, T, S, cfg, s) for T in Ts]
        scan = contraction_scan(fam, Ts[0], S, [1e-3, 10 ** -3.333, 10 ** -3.667, 1e-4], s, cfg, base,
                                bisect_steps=0)
        it = iterate_K(1e-3 * base, fam, Ts[0], S, 50, cfg, s)
        good = (all(f < 1 for f in factors) and abs(scan.slope - 1.0) <= 0.15 and it.converged
                and it.norms[-1] < 1e-12)
        ok &= good
        parts.append(f"{name}: contracting={sum(f < 1 for f in factors)}/20 max_factor={max(factors):.2e} "
                     f"slope={scan.slope:.4f} iterations={len(it.norms) - 1}")
    verdict(record_property, 8, ok, "; ".join(parts))


def test_criterion_09_B_R_scalings(record_property):
    base = random_field(64, 1.0, 4.0, 9)
    amps = [1e-2, 10 ** -2.333, 10 ** -2.667, 1e-3]
    fam, s = fifth(), 4
    eb = loglog_fit(amps, [sobolev_norm(compute_B(a * base, 0.7, fam), s + 3) for a in amps])[0]
    er = loglog_fit(amps, [sobolev_norm(compute_R(a * base, 0.7, fam), s + 2) for a in amps])[0]
    verdict(record_property, 9, abs(eb - 2) <= 0.05 and abs(er - 3) <= 0.05,
            f"B exponent={eb:.6f} R exponent={er:.6f}")


CLI_RUNS = [
    ["identities", "--kmax", "60"],
    ["divisor", "--symbol", "kdv", "--kmax", "64", "--samples", "10"],
    ["simulate", "--family", "kawahara", "--K", "16", "--T", "0.2", "--dt", "0.01"],
    ["duhamel", "--family", "fifth", "--K", "16", "--T", "0.2", "--data", "cosine"],
    ["smoothing", "--family", "kdv", "--K", "16", "--T", "0.2"],
    ["contract", "--family", "fifth", "--K", "16", "--kmax", "64", "--sweep", "true", "--count", "3"],
]


def test_criterion_10_determinism(record_property, tmp_path):
    mismatched, files = [], 0
    for args in CLI_RUNS:
        for tag in ("a", "b"):
            assert run([*args, "--out", str(tmp_path / tag), "--no-timestamp"]) == 0, args
    for fa in sorted((tmp_path / "a").iterdir()):
        files += 1
        if fa.read_bytes() != (tmp_path / "b" / fa.name).read_bytes():
            mismatched.append(fa.name)
    verdict(record_property, 10, files > 0 and not mismatched,
            f"{files} JSON/CSV payloads compared, mismatched={mismatched}")
