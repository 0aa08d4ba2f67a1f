"""Dispersion symbols and the diagonal multipliers built from them.

A symbol is ``i * psi(k)`` with ``psi(k) = sum_m alpha_m k^{r_m}``.  Orders are
restricted to odd positive integers so that psi is odd in k and the linear
flow maps real fields to real fields.

Phases ``psi(k) * t`` can be enormous (k^7 at k = 128 is ~5e14), so the
multipliers reduce the phase modulo 2*pi in exact rational / fixed-point
arithmetic before handing it to floating point.
"""
from __future__ import annotations

import ast
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from .spectrum import FourierField

SINGULARITY_GUARD = 1e-10

_FIX_BITS = 256
with mpmath.workdps(120):
    _TWO_PI_FIX = int(mpmath.floor(2 * mpmath.pi * mpmath.mpf(2) ** _FIX_BITS))


class SymbolError(ValueError):
    pass


class SingularityError(ArithmeticError):
    """(I - S_L(T)) is numerically singular at mode k."""

    def __init__(self, k: int, T: float, gap: float):
        self.k, self.T, self.gap = k, T, gap
        super().__init__(f"resonant mode k={k} at T={T!r}: |1 - exp(i psi T)| = {gap:.3e}")


class InconclusiveHypotheses(RuntimeError):
    """The scan range is too short to certify the large-|k| tail."""


@dataclass(frozen=True)
class LinearSymbol:
    terms: tuple  # ((alpha_1, r_1), ..., (alpha_M, r_M)), r strictly decreasing

    def __post_init__(self):
        terms = tuple((float(a), int(r)) for a, r in self.terms)
        if not terms:
            raise SymbolError("a symbol needs at least one term")
        orders = [r for _, r in terms]
        for (a, r), raw in zip(terms, self.terms):
            if r != raw[1] or r <= 0 or r % 2 == 0:
                raise SymbolError(f"order {raw[1]!r} is not an odd positive integer")
            if not math.isfinite(a):
                raise SymbolError("non-finite coefficient")
        if any(r1 <= r2 for r1, r2 in zip(orders, orders[1:])):
            raise SymbolError(f"orders {orders} are not strictly decreasing")
        object.__setattr__(self, "terms", terms)

    @property
    def orders(self) -> tuple:
        return tuple(r for _, r in self.terms)

    @property
    def coefficients(self) -> tuple:
        return tuple(a for a, _ in self.terms)

    @property
    def leading_order(self) -> int:
        return self.terms[0][1]

    def psi_exact(self, k: int) -> Fraction:
        return sum((Fraction(a) * int(k) ** r for a, r in self.terms), Fraction(0))

    def psi(self, k: int) -> float:
        return float(self.psi_exact(k))

    def psi_array(self, K: int) -> np.ndarray:
        """psi(k) for k = 0..K as floats."""
        return _psi_table(self.terms, K).copy()

    def negated(self) -> "LinearSymbol":
        return LinearSymbol(tuple((-a, r) for a, r in self.terms))

    def __str__(self):
        return " + ".join(f"{a:g}*k^{r}" for a, r in self.terms)


@lru_cache(maxsize=64)
def _psi_table(terms: tuple, K: int) -> np.ndarray:
    sym = LinearSymbol(terms)
    out = np.array([float(sym.psi_exact(k)) for k in range(K + 1)])
    out.flags.writeable = False
    return out


def symbol_value(A: LinearSymbol, k: int) -> float:
    """psi(k); the symbol itself is i*psi(k)."""
    return A.psi(k)


# -- presets -----------------------------------------------------------------

def preset_symbol(name: str, *params: float) -> LinearSymbol:
    """Named symbol presets (coefficients after mean reduction).

    fifth(omega)          k^5 + omega k
    kawahara(theta, a)    k^5 + theta k^3 - 2a k
    seventh(a)            -k^7 - 2a k
    kdv(a)                k^3 - a k
    """
    name = name.lower()
    p = [float(x) for x in params]
    if name == "fifth":
        (omega,) = p or [0.0]
        return LinearSymbol(((1.0, 5), (omega, 1)))
    if name == "kawahara":
        theta, alpha = (p + [0.0, 0.0])[:2]
        return LinearSymbol(((1.0, 5), (theta, 3), (-2.0 * alpha, 1)))
    if name == "seventh":
        (alpha,) = p or [0.0]
        return LinearSymbol(((-1.0, 7), (-2.0 * alpha, 1)))
    if name == "kdv":
        (alpha,) = p or [0.0]
        return LinearSymbol(((1.0, 3), (-alpha, 1)))
    raise SymbolError(f"unknown symbol preset {name!r}")


_PRESET_RE = re.compile(r"^\s*([a-zA-Z]+)\s*(?:\((.*)\))?\s*$")


def parse_symbol(text: str) -> LinearSymbol:
    """Parse ``"fifth(0.5)"``-style presets or a literal ``[[alpha, r], ...]`` list."""
    text = text.strip()
    if text.startswith("["):
        try:
            pairs = ast.literal_eval(text)
            return LinearSymbol(tuple((float(a), r) for a, r in pairs))
        except (ValueError, SyntaxError, TypeError) as exc:
            raise SymbolError(f"cannot parse symbol {text!r}: {exc}") from None
    m = _PRESET_RE.match(text)
    if not m:
        raise SymbolError(f"cannot parse symbol {text!r}")
    args = [a for a in (m.group(2) or "").split(",") if a.strip()]
    try:
        params = [float(a) for a in args]
    except ValueError:
        raise SymbolError(f"non-numeric parameter in {text!r}") from None
    return preset_symbol(m.group(1), *params)


# -- hypotheses (H) ----------------------------------------------------------

@dataclass(frozen=True)
class HypothesesWitness:
    beta1: float
    beta2: float
    Z_boxes: tuple
    k_scan_limit: int
    orders: tuple
    ratio_inf: float   # inf_{k, alpha} |sum_m alpha_m k^{r_m - r_1}|
    ratio_sup: float   # sup of the same quantity
    alpha_abs_sum: float  # sum_m sup_{Z_m} |alpha_m|
    k_tail: int        # beyond this |k| the leading term dominates

    def __post_init__(self):
        if not (self.beta1 > 0 and self.beta2 > 0):
            raise SymbolError("witness constants must be positive")


@dataclass(frozen=True)
class Violation:
    condition: str     # "h1" or "h2"
    k: int | None
    alpha: tuple
    value: float


def _box_range(lo: float, hi: float, x: float) -> tuple[float, float]:
    a, b = lo * x, hi * x
    return (a, b) if a <= b else (b, a)


def check_hypotheses(orders, Z_boxes, k_scan_limit: int = 1000):
    """Check (h1)/(h2) over a product of closed coefficient boxes.

    Returns a :class:`HypothesesWitness`, or a :class:`Violation` carrying a
    concrete ``(k, alpha)`` at which the symbol vanishes.  Raises
    :class:`InconclusiveHypotheses` when ``k_scan_limit`` is too small to cover
    the finite range where lower-order terms can compete with the leading one.
    """
    orders = tuple(int(r) for r in orders)
    boxes = tuple((float(lo), float(hi)) for lo, hi in Z_boxes)
    if len(boxes) != len(orders):
        raise SymbolError("one coefficient box per order is required")
    LinearSymbol(tuple((1.0, r) for r in orders))  # validates the orders
    for lo, hi in boxes:
        if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
            raise SymbolError(f"coefficient box [{lo}, {hi}] is not a bounded interval")

    lo1, hi1 = boxes[0]
    if lo1 <= 0.0 <= hi1:
        return Violation("h1", None, (0.0,) + tuple(b[0] for b in boxes[1:]), 0.0)
    a1_min = min(abs(lo1), abs(hi1))
    a1_max = max(abs(lo1), abs(hi1))
    sups = [max(abs(lo), abs(hi)) for lo, hi in boxes]
    lower_sum = sum(sups[1:])

    r1 = orders[0]
    k_tail = 0
    if len(orders) > 1 and lower_sum > 0:
        gap = r1 - orders[1]
        k_tail = max(1, int((2.0 * lower_sum / a1_min) ** (1.0 / gap)))
        while float(k_tail) ** (-gap) * lower_sum >= a1_min / 2.0:
            k_tail += 1
    if k_tail > k_scan_limit:
        raise InconclusiveHypotheses(
            f"tail certificate needs |k| > {k_tail}, beyond k_scan_limit={k_scan_limit}")

    beta2 = math.inf
    ratio_inf, ratio_sup = math.inf, 0.0
    for k in range(1, k_scan_limit + 1):
        powers = [k**r for r in orders]
        rng = [_box_range(lo, hi, float(pw)) for (lo, hi), pw in zip(boxes, powers)]
        vlo = sum(a for a, _ in rng)
        vhi = sum(b for _, b in rng)
        if vlo <= 0.0 <= vhi:
            return Violation("h2", k, *_zero_point(boxes, powers))
        beta2 = min(beta2, min(abs(vlo), abs(vhi)))
        scale = float(k**r1)
        ratio_inf = min(ratio_inf, min(abs(vlo), abs(vhi)) / scale)
        ratio_sup = max(ratio_sup, max(abs(vlo), abs(vhi)) / scale)

    # |k| > k_scan_limit: the leading term dominates (k_scan_limit >= k_tail)
    kk = k_scan_limit + 1
    spill = lower_sum * float(kk) ** (orders[1] - r1) if len(orders) > 1 else 0.0
    beta2 = min(beta2, float(kk) ** r1 * a1_min / 2.0)
    ratio_inf = min(ratio_inf, a1_min - spill)
    ratio_sup = max(ratio_sup, a1_max + spill)
    return HypothesesWitness(beta1=a1_min / 2.0, beta2=beta2, Z_boxes=boxes,
                             k_scan_limit=k_scan_limit, orders=orders,
                             ratio_inf=ratio_inf, ratio_sup=ratio_sup,
                             alpha_abs_sum=float(sum(sups)), k_tail=k_tail)


def _zero_point(boxes, powers):
    """A coefficient vector in the box where sum alpha_m k^{r_m} = 0 (psi is affine in alpha)."""
    corners = np.array(np.meshgrid(*[list(b) for b in boxes], indexing="ij")).reshape(len(boxes), -1).T
    vals = corners @ np.array(powers, dtype=float)
    i_neg, i_pos = int(np.argmin(vals)), int(np.argmax(vals))
    if vals[i_neg] == 0.0:
        return tuple(float(x) for x in corners[i_neg]), 0.0
    if vals[i_pos] == 0.0:
        return tuple(float(x) for x in corners[i_pos]), 0.0
    t = -vals[i_neg] / (vals[i_pos] - vals[i_neg])
    alpha = corners[i_neg] + t * (corners[i_pos] - corners[i_neg])
    return tuple(float(x) for x in alpha), float(alpha @ np.array(powers, dtype=float))


def witness_for(A: LinearSymbol, boxes=None, k_scan_limit: int = 1000) -> HypothesesWitness:
    """Hypotheses witness for a concrete symbol; point boxes unless given."""
    if boxes is None:
        boxes = [(a, a) for a in A.coefficients]
    result = check_hypotheses(A.orders, boxes, k_scan_limit)
    if isinstance(result, Violation):
        raise SymbolError(f"symbol {A} violates hypothesis {result.condition} at k={result.k}")
    for a, (lo, hi) in zip(A.coefficients, result.Z_boxes):
        if not lo <= a <= hi:
            raise SymbolError(f"coefficient {a} lies outside its box [{lo}, {hi}]")
    return result


# -- multipliers -------------------------------------------------------------

def reduced_phase(psi: Fraction, t: float) -> float:
    """(psi * t) mod 2*pi in [0, 2*pi), computed without cancellation."""
    x = Fraction(psi) * Fraction(t)
    X = (x.numerator << _FIX_BITS) // x.denominator
    return (X % _TWO_PI_FIX) / (1 << _FIX_BITS)


def reduced_phases(A: LinearSymbol, t, K: int) -> np.ndarray:
    """Reduced phases psi(k) t mod 2*pi for k = 0..K; ``t`` may be a float or a Fraction."""
    t = t if isinstance(t, Fraction) else Fraction(float(t))
    return _reduced_phases(A.terms, t, K).copy()


@lru_cache(maxsize=256)
def _reduced_phases(terms: tuple, t: Fraction, K: int) -> np.ndarray:
    A = LinearSymbol(terms)
    out = np.array([reduced_phase(A.psi_exact(k), t) for k in range(K + 1)])
    out.flags.writeable = False
    return out


def propagator_multiplier(A: LinearSymbol, t: float, k: int) -> complex:
    """exp(i psi(k) t)."""
    th = reduced_phase(A.psi_exact(k), t)
    return complex(math.cos(th), math.sin(th))


def _inverse_from_phase(th, k, T):
    s = np.sin(th)
    one_minus_cos = 2.0 * np.sin(th / 2.0) ** 2
    gap = np.hypot(one_minus_cos, s)
    return 1.0 / (one_minus_cos - 1j * s), gap


def inverse_factor_multiplier(A: LinearSymbol, T: float, k: int) -> complex:
    """1 / (1 - exp(i psi(k) T)); raises :class:`SingularityError` near resonance."""
    th = reduced_phase(A.psi_exact(k), T)
    val, gap = _inverse_from_phase(th, k, T)
    if gap < SINGULARITY_GUARD:
        raise SingularityError(k, T, float(gap))
    return complex(val)


def inverse_factor_magnitude(A: LinearSymbol, T: float, k: int) -> float:
    """Closed form (1/sqrt 2)(1 - cos(psi T))^(-1/2)."""
    th = reduced_phase(A.psi_exact(k), T)
    one_minus_cos = 2.0 * math.sin(th / 2.0) ** 2
    return 1.0 / (math.sqrt(2.0) * math.sqrt(one_minus_cos))


def linear_multipliers(A: LinearSymbol, t: float, K: int) -> np.ndarray:
    th = reduced_phases(A, t, K)
    m = np.exp(1j * th)
    m[0] = 0.0
    return m


def inverse_multipliers(A: LinearSymbol, T: float, K: int) -> np.ndarray:
    th = reduced_phases(A, T, K)
    vals, gaps = _inverse_from_phase(th[1:], None, T)
    bad = np.nonzero(gaps < SINGULARITY_GUARD)[0]
    if bad.size:
        k = int(bad[0]) + 1
        raise SingularityError(k, T, float(gaps[bad[0]]))
    out = np.zeros(K + 1, dtype=complex)
    out[1:] = vals
    return out


def apply_linear(A: LinearSymbol, t: float, f: FourierField) -> FourierField:
    """S_L(t) f."""
    if t == 0:
        return f
    return FourierField.from_half(f.half * linear_multipliers(A, t, f.K))


def apply_one_minus_linear(A: LinearSymbol, T: float, f: FourierField) -> FourierField:
    """(I - S_L(T)) f."""
    return FourierField.from_half(f.half * (1.0 - linear_multipliers(A, T, f.K)))


def apply_inverse_factor(A: LinearSymbol, T: float, f: FourierField) -> FourierField:
    """(I - S_L(T))^{-1} f; every mode 1..K must be non-resonant."""
    return FourierField.from_half(f.half * inverse_multipliers(A, T, f.K))
