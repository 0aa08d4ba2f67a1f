"""Truncated Fourier representation of 2*pi-periodic, mean-zero, real fields.

A field is stored as a dense complex array over the modes k = -K..K (index
``k + K``).  The zero mode is always exactly 0 and the negative modes are the
complex conjugates of the positive ones; every constructor rebuilds the
negative half from the positive half so the symmetry holds bit-for-bit.

Norms use homogeneous weights |k|^(2s) and the plain l2 sum of coefficients
(no 2*pi factor).  On mean-zero fields this is equivalent to the usual H^s
norm, which is all the downstream estimates care about.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

MAX_K = 512


class FieldError(ValueError):
    """Raised for fields that violate the mean-zero / Hermitian / finite contract."""


@dataclass(frozen=True, eq=False)
class FourierField:
    K: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        K = int(self.K)
        if K < 1 or K > MAX_K:
            raise FieldError(f"truncation K={K} outside 1..{MAX_K}")
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != (2 * K + 1,):
            raise FieldError(f"expected {2 * K + 1} coefficients, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise FieldError("non-finite Fourier coefficient")
        if c[K] != 0:
            raise FieldError("mean (k=0 coefficient) must be exactly zero")
        if not np.array_equal(c[:K][::-1], np.conj(c[K + 1:])):
            raise FieldError("coefficients are not Hermitian symmetric")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_half(cls, half) -> "FourierField":
        """Build from coefficients for k = 0..K (entry 0 is discarded)."""
        half = np.asarray(half, dtype=complex)
        K = half.shape[0] - 1
        c = np.empty(2 * K + 1, dtype=complex)
        c[K] = 0.0
        c[K + 1:] = half[1:]
        c[:K] = np.conj(half[1:][::-1])
        return cls(K, c)

    @classmethod
    def zeros(cls, K: int) -> "FourierField":
        return cls(K, np.zeros(2 * K + 1, dtype=complex))

    @property
    def half(self) -> np.ndarray:
        """Coefficients for k = 0..K (a fresh, writable copy)."""
        return np.array(self.coeffs[self.K:])

    @property
    def modes(self) -> np.ndarray:
        return np.arange(-self.K, self.K + 1)

    def __getitem__(self, k: int) -> complex:
        if abs(k) > self.K:
            return 0j
        return complex(self.coeffs[k + self.K])

    def __add__(self, other: "FourierField") -> "FourierField":
        _check_same_K(self, other)
        return FourierField.from_half(self.half + other.half)

    def __sub__(self, other: "FourierField") -> "FourierField":
        _check_same_K(self, other)
        return FourierField.from_half(self.half - other.half)

    def __mul__(self, scalar: float) -> "FourierField":
        if isinstance(scalar, complex) or np.iscomplexobj(scalar):
            raise TypeError("only real scalars preserve a real-valued field")
        return FourierField.from_half(self.half * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "FourierField":
        return self * -1.0

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def grid_values(self, n: int | None = None) -> np.ndarray:
        """Physical-space samples on n equispaced points of [0, 2*pi)."""
        n = n or 2 * self.K + 1
        if n < 2 * self.K + 1:
            raise ValueError("grid too coarse for the stored modes")
        return n * np.fft.irfft(self.half, n=n)


def _check_same_K(f: FourierField, g: FourierField):
    if f.K != g.K:
        raise FieldError(f"mismatched truncations K={f.K} and K={g.K}")


def sobolev_weights(K: int, s: float) -> np.ndarray:
    """|k|^s for k = 0..K (entry 0 set to 0)."""
    k = np.arange(K + 1, dtype=float)
    w = k ** float(s)
    w[0] = 0.0
    return w


def half_sobolev_norm(half: np.ndarray, s: float) -> float:
    """Sobolev norm computed from the k >= 0 half of a Hermitian array."""
    w = sobolev_weights(half.shape[-1] - 1, s)
    return float(np.sqrt(2.0 * np.sum((w * np.abs(half)) ** 2, axis=-1)))


def sobolev_norm(f: FourierField, s: float) -> float:
    """( sum_{k != 0} |k|^(2s) |f_k|^2 )^(1/2)."""
    if s < 0:
        raise ValueError("Sobolev index must be nonnegative")
    return half_sobolev_norm(f.half, s)


def derivative_multiplier(K: int, n: int) -> np.ndarray:
    """(ik)^n for k = 0..K, with the power of i applied exactly."""
    k = np.arange(K + 1, dtype=float)
    unit = (1, 1j, -1, -1j)[n % 4]
    return unit * k**n


def derivative(f: FourierField, n: int) -> FourierField:
    if n < 0:
        raise ValueError("derivative order must be nonnegative")
    if n == 0:
        return f
    return FourierField.from_half(f.half * derivative_multiplier(f.K, n))


def padded_grid_size(K: int) -> int:
    # 3K+1 points make the quadratic product alias-free on |k| <= K
    return 3 * K + 1


def half_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Alias-free product of two Hermitian half-arrays, truncated and mean-zeroed."""
    K = a.shape[0] - 1
    M = padded_grid_size(K)
    ua = np.fft.irfft(a, n=M)
    ub = np.fft.irfft(b, n=M)
    w = np.fft.rfft(ua * ub)[: K + 1] * M
    w[0] = 0.0
    return w


def product(f: FourierField, g: FourierField) -> FourierField:
    """Mean-zero projection of f*g, truncated to |k| <= K (no aliasing)."""
    _check_same_K(f, g)
    return FourierField.from_half(half_product(f.half, g.half))


def random_field(K: int, amplitude: float, decay: float, seed: int) -> FourierField:
    """Random-phase field with |f_k| = amplitude * |k|^(-decay)."""
    if K < 1:
        raise ValueError("K must be >= 1")
    if amplitude < 0:
        raise ValueError("amplitude must be nonnegative")
    rng = np.random.default_rng(seed)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=K)
    k = np.arange(1, K + 1, dtype=float)
    half = np.zeros(K + 1, dtype=complex)
    half[1:] = amplitude * k ** (-float(decay)) * np.exp(1j * phases)
    return FourierField.from_half(half)


def cosine_field(K: int, amplitude: float, mode: int = 1) -> FourierField:
    """amplitude * cos(mode * x)."""
    half = np.zeros(K + 1, dtype=complex)
    half[mode] = amplitude / 2.0
    return FourierField.from_half(half)


# -- field file format -------------------------------------------------------

def field_to_dict(f: FourierField) -> dict:
    h = f.half
    return {"K": f.K,
            "coeffs": [[k, float(h[k].real), float(h[k].imag)] for k in range(1, f.K + 1)]}


def field_from_dict(d: dict) -> FourierField:
    try:
        K = int(d["K"])
        entries = d["coeffs"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FieldError(f"malformed field document: {exc}") from None
    if K < 1 or K > MAX_K:
        raise FieldError(f"truncation K={K} outside 1..{MAX_K}")
    half = np.zeros(K + 1, dtype=complex)
    seen = set()
    for entry in entries:
        if len(entry) != 3:
            raise FieldError(f"coefficient entry {entry!r} is not [k, re, im]")
        k, re, im = entry
        if int(k) != k or not 1 <= k <= K:
            raise FieldError(f"mode {k} outside 1..{K} (only k >= 1 may be listed)")
        if k in seen:
            raise FieldError(f"mode {k} listed twice")
        seen.add(k)
        half[int(k)] = complex(float(re), float(im))
    return FourierField.from_half(half)


def save_field(f: FourierField, path) -> None:
    Path(path).write_text(json.dumps(field_to_dict(f)) + "\n")


def load_field(path) -> FourierField:
    return field_from_dict(json.loads(Path(path).read_text()))
