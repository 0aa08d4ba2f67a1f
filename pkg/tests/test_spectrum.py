import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from smallperiod.spectrum import (FieldError, FourierField, cosine_field, derivative, field_from_dict,
                                  field_to_dict, load_field, product, random_field, save_field, sobolev_norm)

from conftest import fields


def test_cosine_norm_is_one_over_root_two_for_every_s():
    f = cosine_field(8, 1.0)
    for s in (0, 1, 3.5, 6):
        assert sobolev_norm(f, s) == pytest.approx(1 / math.sqrt(2), rel=1e-15)


def test_zero_field_has_zero_norm():
    assert sobolev_norm(FourierField.zeros(5), 4) == 0.0


def test_sin2x_h1_norm():
    half = np.zeros(4, dtype=complex)
    half[2] = -0.5j
    f = FourierField.from_half(half)
    assert f[-2] == 0.5j
    assert sobolev_norm(f, 1) == pytest.approx(math.sqrt(2), rel=1e-15)


def test_negative_sobolev_index_rejected():
    with pytest.raises(ValueError):
        sobolev_norm(cosine_field(4, 1.0), -1)


def test_invariants_enforced():
    K = 3
    c = np.zeros(2 * K + 1, dtype=complex)
    c[K] = 1.0
    with pytest.raises(FieldError):
        FourierField(K, c)
    c[K] = 0.0
    c[K + 1] = 1j
    with pytest.raises(FieldError):
        FourierField(K, c)  # -1 mode not conjugate
    c[K - 1] = -1j
    FourierField(K, c)
    c[K + 2] = np.nan
    c[K - 2] = np.nan
    with pytest.raises(FieldError):
        FourierField(K, c)
    with pytest.raises(FieldError):
        FourierField(0, np.zeros(1))
    with pytest.raises(FieldError):
        FourierField(3, np.zeros(5))


def test_coefficients_are_read_only():
    f = cosine_field(4, 1.0)
    with pytest.raises(ValueError):
        f.coeffs[5] = 3.0


def test_derivative_examples():
    c = cosine_field(4, 1.0)
    d = derivative(c, 1)
    # -sin x: coefficient at k=1 is i/2
    assert d[1] == pytest.approx(0.5j) and d[-1] == pytest.approx(-0.5j)
    assert derivative(c, 0) is c
    half = np.zeros(5, dtype=complex)
    half[1] = -0.5j                      # sin x
    s = FourierField.from_half(half)
    assert np.allclose(derivative(s, 2).coeffs, (-1.0 * s).coeffs, atol=0, rtol=0)


def test_product_cos_squared():
    c = cosine_field(6, 1.0)
    p = product(c, c)
    assert p[2] == pytest.approx(0.25, abs=1e-15)
    assert p[0] == 0
    others = [k for k in range(1, 7) if k != 2]
    assert max(abs(p[k]) for k in others) < 1e-16


def test_product_mismatched_K():
    with pytest.raises(FieldError):
        product(cosine_field(4, 1.0), cosine_field(5, 1.0))


def brute_convolution(f, g):
    K = f.K
    out = np.zeros(K + 1, dtype=complex)
    for k in range(1, K + 1):
        out[k] = sum(f[k - j] * g[j] for j in range(-K, K + 1) if abs(k - j) <= K)
    return out


@given(fields(max_K=12), st.data())
def test_product_matches_brute_force_convolution(f, data):
    g = data.draw(fields(K=f.K))
    ref = brute_convolution(f, g)
    got = product(f, g).half
    scale = max(np.abs(ref).max(), 1e-300)
    assert np.abs(got - ref).max() <= 1e-13 * scale + 1e-300


def test_product_brute_force_at_K64():
    f, g = random_field(64, 1.0, 1.0, 1), random_field(64, 1.0, 0.5, 2)
    ref = brute_convolution(f, g)
    assert np.linalg.norm(product(f, g).half - ref) / np.linalg.norm(ref) < 1e-13


@given(fields(), st.data())
def test_product_commutes_and_zero_annihilates(f, data):
    g = data.draw(fields(K=f.K))
    assert np.allclose(product(f, g).coeffs, product(g, f).coeffs, rtol=1e-13, atol=1e-14)
    assert product(f, FourierField.zeros(f.K)).is_zero()


@given(fields(), st.floats(0, 5), st.floats(0, 5))
def test_norm_monotone_in_s(f, s1, s2):
    lo, hi = sorted((s1, s2))
    assert sobolev_norm(f, lo) <= sobolev_norm(f, hi) * (1 + 1e-12)


@given(fields(), st.integers(0, 4))
def test_derivative_shifts_norm_index(f, s):
    assert sobolev_norm(derivative(f, 1), s) == pytest.approx(sobolev_norm(f, s + 1), rel=1e-12, abs=1e-300)


@given(fields(), st.integers(0, 6))
def test_operations_preserve_invariants(f, n):
    for g in (derivative(f, n), product(f, f), f + f, f - f, -f, 2.5 * f):
        assert g.coeffs[g.K] == 0
        assert np.array_equal(g.coeffs[:g.K][::-1], np.conj(g.coeffs[g.K + 1:]))


def test_random_field_contract():
    assert random_field(16, 0.0, 3, 1).is_zero()
    a, b = random_field(16, 1.0, 3, 7), random_field(16, 1.0, 3, 7)
    assert np.array_equal(a.coeffs, b.coeffs)
    n1 = sobolev_norm(random_field(64, 1e-2, 8, 3), 6)
    n2 = sobolev_norm(random_field(64, 2e-2, 8, 3), 6)
    assert math.isfinite(n1) and n2 == pytest.approx(2 * n1, rel=1e-14)
    with pytest.raises(ValueError):
        random_field(0, 1.0, 1, 0)


def test_grid_values_of_cosine():
    x = 2 * np.pi * np.arange(9) / 9
    assert np.allclose(cosine_field(4, 2.0).grid_values(9), 2 * np.cos(x), atol=1e-14)


@given(fields())
def test_json_round_trip(f):
    assert np.array_equal(field_from_dict(json.loads(json.dumps(field_to_dict(f)))).coeffs, f.coeffs)


def test_file_round_trip(tmp_path):
    f = random_field(10, 1.0, 2, 4)
    save_field(f, tmp_path / "f.json")
    assert np.array_equal(load_field(tmp_path / "f.json").coeffs, f.coeffs)


@pytest.mark.parametrize("doc", [
    {"K": 2, "coeffs": [[0, 1.0, 0.0]]},
    {"K": 2, "coeffs": [[-1, 1.0, 0.0]]},
    {"K": 2, "coeffs": [[3, 1.0, 0.0]]},
    {"K": 2, "coeffs": [[1, 1.0, 0.0], [1, 2.0, 0.0]]},
    {"K": 2, "coeffs": [[1, 1.0]]},
    {"K": 2, "coeffs": [[1, float("nan"), 0.0]]},
    {"coeffs": []},
    {"K": 0, "coeffs": []},
])
def test_field_file_rejects_invalid(doc):
    with pytest.raises(FieldError):
        field_from_dict(doc)
