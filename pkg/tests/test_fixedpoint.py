import math

import pytest

from smallperiod.duhamel import duhamel_direct
from smallperiod.evolution import SolverConfig
from smallperiod.families import fifth, kdv
from smallperiod.fixedpoint import (UncertifiedPeriod, apply_K, contraction_factor, contraction_scan,
                                    distance_to_excluded, iterate_K, period_sweep)
from smallperiod.smalldivisor import build_excluded_set, contains, sample_periods
from smallperiod.spectrum import FourierField, random_field, sobolev_norm
from smallperiod.symbols import apply_one_minus_linear

K = 16
CFG = SolverConfig(K, 1e-3)
BASE = random_field(K, 1.0, 12, 0)


@pytest.fixture(scope="module")
def setup():
    fam = fifth()
    S = build_excluded_set(fam.linear, fam.witness(), 1.0, 2.0, 1.5, 0.1, 128)
    return fam, S, sample_periods(S, 3, 0)


def test_zero_maps_to_zero(setup):
    fam, S, Ts = setup
    assert apply_K(FourierField.zeros(K), fam, Ts[0], S, CFG).is_zero()


def test_inverse_factor_undone(setup):
    fam, S, Ts = setup
    u0 = 1e-3 * BASE
    Ku = apply_K(u0, fam, Ts[0], S, CFG)
    sd = duhamel_direct(u0, fam, Ts[0], CFG)
    back = apply_one_minus_linear(fam.linear, Ts[0], Ku)
    assert sobolev_norm(back - sd, 0) <= 1e-10 * sobolev_norm(sd, 0)


def test_uncertified_period_rejected(setup):
    fam, S, _ = setup
    k, n, c, r = S.intervals(2)[0]
    with pytest.raises(UncertifiedPeriod):
        apply_K(1e-3 * BASE, fam, c, S, CFG)
    with pytest.raises(UncertifiedPeriod):
        apply_K(1e-3 * BASE, fam, 3.0, S, CFG)


def test_normalform_and_direct_K_agree(setup):
    fam, S, Ts = setup
    u0 = 1e-3 * BASE
    a = apply_K(u0, fam, Ts[1], S, CFG, "direct")
    b = apply_K(u0, fam, Ts[1], S, CFG, "normalform")
    assert sobolev_norm(a - b, 6) <= 1e-6 * sobolev_norm(a, 6)
    with pytest.raises(ValueError):
        apply_K(u0, fam, Ts[1], S, CFG, "spectral")


def test_factor_linear_in_amplitude(setup):
    fam, S, Ts = setup
    rep = contraction_scan(fam, Ts[0], S, [1e-2, 3e-3, 1e-3, 3e-4], 6, CFG, BASE, bisect_steps=0)
    assert rep.slope == pytest.approx(1.0, abs=0.15)
    assert all(r[3] < 1 for r in rep.rows)
    d = rep.to_dict()
    assert "caveat" in d and len(d["rows"]) == 4


def test_iteration_decays_superlinearly(setup):
    fam, S, Ts = setup
    u0 = 1e-3 * BASE
    f = contraction_factor(u0, fam, Ts[2], S, CFG, 6)
    it = iterate_K(u0, fam, Ts[2], S, 50, CFG, 6)
    assert it.converged and not it.diverged and it.monotone
    assert len(it.norms) <= 51 and it.norms[-1] < 1e-12
    assert it.ratios[0] == pytest.approx(f, rel=1e-12)
    assert iterate_K(FourierField.zeros(K), fam, Ts[2], S, 5, CFG, 6).norms == [0.0]


def test_r0_bracket_for_kdv():
    fam = kdv()
    S = build_excluded_set(fam.linear, fam.witness(), 1.0, 2.0, 1.5, 0.1, 128)
    T = sample_periods(S, 1, 0)[0]
    rep = contraction_scan(fam, T, S, [0.5, 0.1, 0.02], 4, SolverConfig(K, 1e-3), BASE, bisect_steps=3)
    lo, hi = rep.r0_interval
    assert lo is not None and hi is not None and lo < hi
    assert rep.rows[-1][3] < 1


def test_scan_rejects_bad_ladders(setup):
    fam, S, Ts = setup
    with pytest.raises(ValueError):
        contraction_scan(fam, Ts[0], S, [], 6, CFG, BASE)
    with pytest.raises(ValueError):
        contraction_scan(fam, Ts[0], S, [1e-3, -1e-3], 6, CFG, BASE)
    with pytest.raises(ValueError):
        contraction_scan(fam, Ts[0], S, [1e-3], 6, CFG, FourierField.zeros(K))


def test_sweep_rows_and_distance(setup):
    fam, S, _ = setup
    assert period_sweep(fam, S, 0, 1e-3, 6, CFG, 0, BASE) == []
    rows = period_sweep(fam, S, 3, 1e-3, 6, CFG, 4, BASE)
    assert [r["T"] for r in rows] == sample_periods(S, 3, 4)
    for r in rows:
        assert 0 < r["factor"] < 1 and r["distance"] > 0 and 1 <= r["nearest_k"] <= S.k_max
    k, n, c, rad = S.intervals(3)[-1]
    kk, gap = distance_to_excluded(S, c)
    assert gap < 0 and not contains(S, c).certified
    assert math.isfinite(gap)
