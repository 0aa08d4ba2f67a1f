"""Periods that keep the inverse factor (I - S_L(T))^{-1} polynomially bounded.

Around every resonant period 2 pi n / |psi(k)| a closed interval of radius

    eps_k = c0 |k|^(-p - r1)

is removed from [T1, T2].  Outside the union, |psi(k) T - 2 pi n| >= eps_k |psi(k)|
for every n, and the cosine bound 1 - cos x >= x^2 / 4 (|x| <= 3/2) gives

    |1 / (1 - exp(i psi(k) T))| <= c1 |k|^p,   c1 = sqrt(2) / (c0 * ratio_inf),

where ratio_inf = inf |psi(k)| / |k|^r1 comes from the hypotheses witness.

For k = 128 and a fifth-order symbol there are ~10^10 resonant periods in a
unit window, so intervals are never materialised wholesale.  Membership is a
per-k distance test on the exactly reduced phase, and the removed measure is
counted analytically per k.  Modes k and -k remove identical intervals, so
only k >= 1 is visited.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from .symbols import HypothesesWitness, LinearSymbol, inverse_factor_magnitude, reduced_phase

_MP_DPS = 40
TWO_PI = 2.0 * math.pi


class DivisorError(ValueError):
    pass


def p_series_bound(p: float, k_max: int) -> float:
    """Rigorous upper bound for sum_{k != 0} |k|^-p: partial sum to k_max plus an integral tail."""
    if p <= 1:
        raise DivisorError(f"p={p} must exceed 1 for the series to converge")
    partial = math.fsum(k ** -p for k in range(1, k_max + 1))
    return 2.0 * partial + tail_series_bound(p, k_max)


def tail_series_bound(p: float, k_max: int) -> float:
    """Upper bound for sum_{|k| > k_max} |k|^-p."""
    return 2.0 * k_max ** (1.0 - p) / (p - 1.0)


@dataclass(frozen=True)
class Verdict:
    status: str              # "in_W_truncated", "excluded" or "outside_window"
    k: int | None = None
    n: int | None = None

    @property
    def certified(self) -> bool:
        return self.status == "in_W_truncated"


@dataclass(frozen=True)
class ExcludedSet:
    symbol: LinearSymbol
    T1: float
    T2: float
    p: float
    delta: float
    c0: float
    c1: float
    k_max: int
    r1: int
    removed_measure: float       # sum over k of clipped interval lengths (bounds the union)
    uncertified_tail: float      # bound on what modes |k| > k_max could still remove
    c0_caps: tuple               # (phase cap, measure cap)

    def radius(self, k: int) -> float:
        return self.c0 * abs(k) ** (-self.p - self.r1)

    def n_range(self, k: int) -> tuple[int, int]:
        """Indices n whose closed interval meets [T1, T2]."""
        a = abs(self.symbol.psi(k))
        eps = self.radius(k)
        return math.ceil((self.T1 - eps) * a / TWO_PI), math.floor((self.T2 + eps) * a / TWO_PI)

    def intervals(self, max_k: int | None = None, limit: int = 100_000) -> list:
        """Explicit (k, n, center, radius) for 1 <= k <= max_k; refuses to build huge lists."""
        max_k = self.k_max if max_k is None else min(max_k, self.k_max)
        out = []
        for k in range(1, max_k + 1):
            lo, hi = self.n_range(k)
            if len(out) + max(0, hi - lo + 1) > limit:
                raise DivisorError(f"more than {limit} intervals up to k={k}; lower max_k")
            a = abs(self.symbol.psi(k))
            out.extend((k, n, TWO_PI * n / a, self.radius(k)) for n in range(lo, hi + 1) if n > 0)
        return out

    def summary(self) -> dict:
        return {"T1": self.T1, "T2": self.T2, "p": self.p, "delta": self.delta, "c0": self.c0,
                "c1": self.c1, "k_max": self.k_max, "removed_measure": self.removed_measure,
                "uncertified_tail": self.uncertified_tail, "c0_caps": list(self.c0_caps),
                "symbol": [list(t) for t in self.symbol.terms]}


def _removed_for_k(a: Fraction, eps: float, T1: float, T2: float) -> float:
    """Total length of [2 pi n/a - eps, 2 pi n/a + eps] clipped to [T1, T2], summed over n."""
    with mpmath.workdps(_MP_DPS):
        a_mp = mpmath.mpf(a.numerator) / a.denominator
        e, t1, t2 = mpmath.mpf(eps), mpmath.mpf(T1), mpmath.mpf(T2)
        step = 2 * mpmath.pi / a_mp
        lo = int(mpmath.ceil((t1 - e) / step))
        hi = int(mpmath.floor((t2 + e) / step))
        lo = max(lo, 1)
        if hi < lo:
            return 0.0

        def clipped(n):
            c = n * step
            return max(mpmath.mpf(0), min(c + e, t2) - max(c - e, t1))

        if hi - lo < 8:
            return float(mpmath.fsum(clipped(n) for n in range(lo, hi + 1)))
        edge = [lo, lo + 1, hi - 1, hi]
        return float(mpmath.fsum(clipped(n) for n in edge) + (hi - lo - 3) * 2 * e)


def build_excluded_set(A: LinearSymbol, witness: HypothesesWitness, T1: float, T2: float,
                       p: float, delta: float, k_max: int) -> ExcludedSet:
    if not 0 < T1 < T2:
        raise DivisorError("need 0 < T1 < T2")
    if p <= 1:
        raise DivisorError(f"p={p} must exceed 1")
    width = T2 - T1
    if not 0 < delta < width:
        raise DivisorError(f"delta={delta} must lie in (0, T2 - T1)")
    if k_max < 1:
        raise DivisorError("k_max must be >= 1")
    if tuple(witness.orders) != A.orders:
        raise DivisorError("witness orders do not match the symbol")
    r1 = A.leading_order
    zeta = p_series_bound(p, k_max)
    # |psi(k)| eps_k <= c0 * alpha_abs_sum must stay <= 3/2 (cosine bound)
    phase_cap = 1.5 / witness.alpha_abs_sum
    measure_cap = delta / (2.0 * (1.0 + width * witness.ratio_sup) * zeta)
    c0 = 0.99 * min(phase_cap, measure_cap)
    c1 = math.sqrt(2.0) / (c0 * witness.ratio_inf)
    removed = math.fsum(_removed_for_k(abs(A.psi_exact(k)), c0 * k ** (-p - r1), T1, T2)
                        for k in range(1, k_max + 1))
    tail = 2.0 * c0 * (1.0 + width * witness.ratio_sup) * tail_series_bound(p, k_max)
    if removed > delta:
        raise DivisorError(f"removed measure {removed} exceeds delta={delta}")
    return ExcludedSet(A, float(T1), float(T2), float(p), float(delta), c0, c1, int(k_max), r1,
                       removed, tail, (phase_cap, measure_cap))


def contains(S: ExcludedSet, T: float) -> Verdict:
    """Classify T; boundary points count as excluded (closed intervals)."""
    if not S.T1 <= T <= S.T2:
        return Verdict("outside_window")
    Tq = Fraction(T)
    for k in range(1, S.k_max + 1):
        a = abs(S.symbol.psi_exact(k))
        th = reduced_phase(a, Tq)
        dist = min(th, TWO_PI - th)
        if dist <= S.radius(k) * float(a):
            n = round(float(a * Tq) / TWO_PI)
            return Verdict("excluded", k, n)
    return Verdict("in_W_truncated")


def sample_periods(S: ExcludedSet, count: int, seed: int, budget_factor: int = 100) -> list:
    """Uniform draws from [T1, T2] rejected against :func:`contains`; deterministic per seed."""
    if count <= 0:
        return []
    if S.removed_measure >= S.T2 - S.T1:
        raise DivisorError("excluded set covers the whole window")
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(budget_factor * count):
        T = float(rng.uniform(S.T1, S.T2))
        if contains(S, T).certified:
            out.append(T)
            if len(out) == count:
                return out
    raise DivisorError(f"rejection budget exhausted after {budget_factor * count} draws")


@dataclass(frozen=True)
class BoundReport:
    T: float
    k_max: int
    max_ratio: float          # max_k |inv(k)| / (c1 |k|^p)
    argmax_k: int
    passed: bool
    skipped: str | None = None


def certify_bound(A: LinearSymbol, S: ExcludedSet, T: float, k_range: int | None = None,
                  require_certified: bool = True) -> BoundReport:
    """Check |1/(1 - exp(i psi(k) T))| <= c1 |k|^p for 1 <= k <= k_range."""
    k_range = S.k_max if k_range is None else k_range
    if require_certified:
        v = contains(S, T)
        if not v.certified:
            return BoundReport(T, k_range, math.nan, 0, False, skipped=f"{v.status} (k={v.k}, n={v.n})")
    best, arg = -1.0, 0
    for k in range(1, k_range + 1):
        try:
            r = inverse_factor_magnitude(A, T, k) / (S.c1 * k ** S.p)
        except ZeroDivisionError:
            r = math.inf
        if r > best:
            best, arg = r, k
    return BoundReport(T, k_range, best, arg, best <= 1.0)


def nested_union_measure(A: LinearSymbol, witness: HypothesesWitness, T1: float, T2: float,
                         p: float, k_max: int, n_levels: int) -> list:
    """Rows (n, delta_n, c0, removed) for delta_n = (T2 - T1)/n, n = 2..n_levels."""
    if n_levels < 2:
        raise DivisorError("n_levels must be >= 2")
    rows = []
    for n in range(2, n_levels + 1):
        d = (T2 - T1) / n
        S = build_excluded_set(A, witness, T1, T2, p, d, k_max)
        rows.append({"n": n, "delta": d, "c0": S.c0, "removed_measure": S.removed_measure})
    return rows
