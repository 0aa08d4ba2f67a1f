import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from smallperiod.families import fifth, kdv
from smallperiod.smalldivisor import (TWO_PI, DivisorError, build_excluded_set, certify_bound, contains,
                                      nested_union_measure, p_series_bound, sample_periods, tail_series_bound)
from smallperiod.symbols import LinearSymbol, inverse_factor_magnitude, witness_for

CUBIC = LinearSymbol(((1.0, 3),))


@pytest.fixture(scope="module")
def cubic_set():
    return build_excluded_set(CUBIC, witness_for(CUBIC), 1.0, 2.0, 1.5, 0.1, 64)


@pytest.fixture(scope="module")
def fifth_set():
    fam = fifth()
    return build_excluded_set(fam.linear, fam.witness(), 1.0, 2.0, 1.5, 0.1, 128)


def test_homogeneous_enumeration(cubic_set):
    S = cubic_set
    lo, hi = S.n_range(1)
    assert hi < max(lo, 1)                       # k = 1: no n in [1/2pi, 2/2pi]
    assert S.n_range(2) == (2, 2)
    (k, n, c, r), = [iv for iv in S.intervals(2) if iv[0] == 2]
    assert (k, n) == (2, 2) and c == pytest.approx(math.pi / 2)
    assert S.c1 == pytest.approx(math.sqrt(2) / S.c0)
    assert contains(S, 1.2).certified


def test_constants_respect_caps(cubic_set, fifth_set):
    for S in (cubic_set, fifth_set):
        assert S.c0 < 1.5 and S.c0 <= 0.99 * min(S.c0_caps) * (1 + 1e-15)
        assert S.removed_measure <= S.delta
        assert S.uncertified_tail < 0.01


def test_centers_and_windows(cubic_set):
    S = cubic_set
    for k, n, c, r in S.intervals(6):
        v = contains(S, c)
        assert v.status == "excluded"
        # the verdict may name a smaller k whose interval also covers c
        assert v.k <= k
    assert contains(S, 0.5).status == "outside_window"
    assert contains(S, 2.5).status == "outside_window"


def test_closed_intervals_tie_is_excluded(cubic_set):
    S = cubic_set
    k, n, c, r = [iv for iv in S.intervals(2) if iv[0] == 2][0]
    assert contains(S, c + 0.999 * r).status == "excluded"
    # just outside the k = 2 interval the verdict depends only on other modes
    v = contains(S, c + 1.001 * r)
    assert v.status == "in_W_truncated" or v.k != 2


def test_intervals_disjoint_per_k(fifth_set):
    S = fifth_set
    for k in range(1, 9):
        a = abs(S.symbol.psi(k))
        assert 2 * S.radius(k) < TWO_PI / a
        # endpoint phase distance stays inside the cosine-bound regime
        assert S.radius(k) * a < 1.5


def test_monte_carlo_acceptance(fifth_set):
    S = fifth_set
    rng = np.random.default_rng(3)
    draws = rng.uniform(S.T1, S.T2, 4000)
    rate = np.mean([contains(S, float(T)).certified for T in draws])
    sigma = math.sqrt(0.25 / draws.size)
    assert rate >= 1 - S.delta / (S.T2 - S.T1) - 4 * sigma
    # the removed-measure count itself predicts the rate
    assert abs(rate - (1 - S.removed_measure)) < 4 * sigma


def test_samples_certified_and_deterministic(fifth_set):
    a = sample_periods(fifth_set, 10, 7)
    assert a == sample_periods(fifth_set, 10, 7)
    assert all(contains(fifth_set, T).certified for T in a)
    assert sample_periods(fifth_set, 0, 7) == []


def test_certify_bound_samples_and_skip(fifth_set):
    S = fifth_set
    for T in sample_periods(S, 15, 1):
        assert certify_bound(S.symbol, S, T).passed
    k, n, c, r = S.intervals(2)[0]
    rep = certify_bound(S.symbol, S, c)
    assert not rep.passed and rep.skipped


def test_bound_nearly_attained_at_endpoints(fifth_set):
    S = fifth_set
    for k, n, c, r in S.intervals(3)[:6]:
        for T in (c - r, c + r):
            ratio = inverse_factor_magnitude(S.symbol, T, k) / (S.c1 * k ** S.p)
            assert 0.1 <= ratio <= 1.0


def test_nested_union():
    fam = kdv()
    rows = nested_union_measure(fam.linear, fam.witness(), 1.0, 2.0, 1.5, 128, 10)
    assert [r["n"] for r in rows] == list(range(2, 11))
    for r in rows:
        assert r["removed_measure"] <= r["delta"]
    assert all(b["c0"] < a["c0"] for a, b in zip(rows, rows[1:]))
    assert all(b["removed_measure"] < a["removed_measure"] for a, b in zip(rows, rows[1:]))


@given(p=st.floats(1.05, 6), k_max=st.integers(1, 300))
def test_p_series_bound_is_upper_bound(p, k_max):
    exact = 2 * math.fsum(k ** -p for k in range(1, 20000)) + 2 * 20000 ** (1 - p) / (p - 1)
    assert p_series_bound(p, k_max) >= exact * (1 - 1e-12)
    assert tail_series_bound(p, k_max) > 0


def test_input_errors(cubic_set):
    w = witness_for(CUBIC)
    with pytest.raises(DivisorError):
        build_excluded_set(CUBIC, w, 1, 2, 1.0, 0.1, 8)
    with pytest.raises(DivisorError):
        build_excluded_set(CUBIC, w, 1, 2, 1.5, 1.5, 8)
    with pytest.raises(DivisorError):
        build_excluded_set(CUBIC, w, 2, 1, 1.5, 0.1, 8)
    with pytest.raises(DivisorError):
        build_excluded_set(CUBIC, fifth().witness(), 1, 2, 1.5, 0.1, 8)
    with pytest.raises(DivisorError):
        nested_union_measure(CUBIC, w, 1, 2, 1.5, 8, 1)
