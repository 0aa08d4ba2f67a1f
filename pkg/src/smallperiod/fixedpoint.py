"""K(T) = (I - S_L(T))^{-1} S_D(T) and the contraction experiments built on it.

Initial data of T-periodic solutions are exactly the fixed points of K(T).  At
a certified period the inverse factor grows at most like c1 |k|^p, the Duhamel
term gains p derivatives and is quadratic in u0, so ||K u0|| / ||u0|| ~ ||u0||
and zero is the only fixed point in a small ball.  Everything here measures
that statement empirically; none of it certifies a threshold.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .duhamel import duhamel_direct, duhamel_normalform, loglog_fit
from .evolution import SolverConfig, SolverError
from .families import EquationFamily
from .smalldivisor import ExcludedSet, TWO_PI, contains, sample_periods
from .spectrum import FourierField, sobolev_norm
from .symbols import SingularityError, apply_inverse_factor, reduced_phase

DEFAULT_S = {"fifth": 6, "kawahara": 6, "seventh": 8, "kdv": 4}


class UncertifiedPeriod(ValueError):
    pass


def _certify(S: ExcludedSet, T: float):
    v = contains(S, T)
    if not v.certified:
        raise UncertifiedPeriod(f"T={T!r} is not certified: {v.status} (k={v.k}, n={v.n})")


def apply_K(u0: FourierField, fam: EquationFamily, T: float, S: ExcludedSet, cfg: SolverConfig,
            method: str = "direct") -> FourierField:
    """(I - S_L(T))^{-1} S_D(T) u0 at a certified period."""
    _certify(S, T)
    if u0.is_zero():
        return FourierField.zeros(u0.K)
    if method == "direct":
        sd = duhamel_direct(u0, fam, T, cfg)
    elif method == "normalform":
        sd = duhamel_normalform(u0, fam, T, cfg)
    else:
        raise ValueError(f"unknown method {method!r}")
    return apply_inverse_factor(fam.linear, T, sd)


def contraction_factor(u0: FourierField, fam, T, S, cfg, s: float) -> float:
    return sobolev_norm(apply_K(u0, fam, T, S, cfg), s) / sobolev_norm(u0, s)


@dataclass
class IterationResult:
    norms: list
    converged: bool
    diverged: bool

    @property
    def ratios(self) -> list:
        n = self.norms
        return [b / a for a, b in zip(n, n[1:]) if a > 0]

    @property
    def monotone(self) -> bool:
        return all(b < a for a, b in zip(self.norms, self.norms[1:]) if a > 0)


def iterate_K(u0: FourierField, fam, T, S, n_iter: int, cfg: SolverConfig, s: float,
              tol: float = 1e-12, blowup: float = 10.0) -> IterationResult:
    """Picard iteration u_{n+1} = K(T) u_n, stopping once ||u_n||_{H^s} < tol."""
    _certify(S, T)
    u = u0
    norms = [sobolev_norm(u, s)]
    if norms[0] < tol:
        return IterationResult(norms, True, False)
    for _ in range(n_iter):
        # FourierField.from_half re-imposes Hermitian symmetry and zero mean
        u = FourierField.from_half(apply_K(u, fam, T, S, cfg).half)
        norms.append(sobolev_norm(u, s))
        if norms[-1] < tol:
            return IterationResult(norms, True, False)
        if not math.isfinite(norms[-1]) or norms[-1] > blowup * norms[0]:
            return IterationResult(norms, False, True)
    return IterationResult(norms, False, False)


@dataclass
class ContractionReport:
    family: str
    T: float
    s: float
    rows: list = field(default_factory=list)   # (amplitude, |u0|_s, |K u0|_s, factor) or failure rows
    slope: float = float("nan")
    slope_stderr: float = float("nan")
    r0_interval: tuple = (None, None)
    iteration: list = field(default_factory=list)
    error: str | None = None

    def to_dict(self) -> dict:
        return {"family": self.family, "T": self.T, "s": self.s, "slope": self.slope,
                "slope_stderr": self.slope_stderr, "r0_interval": list(self.r0_interval),
                "iteration": self.iteration, "error": self.error,
                "rows": [dict(zip(("amplitude", "norm_u0", "norm_Ku0", "factor"), r)) for r in self.rows],
                "caveat": "contraction is sampled at finitely many amplitudes and periods; no threshold is certified"}


def _factor_or_inf(base, a, fam, T, S, cfg, s):
    try:
        return contraction_factor(a * base, fam, T, S, cfg, s)
    except (SolverError, SingularityError):
        return math.inf


def contraction_scan(fam: EquationFamily, T: float, S: ExcludedSet, amplitudes, s: float,
                     cfg: SolverConfig, base: FourierField, bisect_steps: int = 6) -> ContractionReport:
    """Contraction factors along an amplitude ladder, a log-log slope and an r0 bracket."""
    amps = sorted({float(a) for a in amplitudes}, reverse=True)
    if not amps or all(a == 0 for a in amps) or any(a < 0 for a in amps):
        raise ValueError("amplitude ladder must contain positive amplitudes only")
    if base.is_zero():
        raise ValueError("base field is zero")
    _certify(S, T)
    rep = ContractionReport(fam.name, float(T), float(s))
    for a in amps:
        u0 = a * base
        try:
            Ku = apply_K(u0, fam, T, S, cfg)
        except (SolverError, SingularityError) as exc:
            rep.rows.append((a, sobolev_norm(u0, s), math.nan, math.inf))
            rep.error = f"amplitude {a:g}: {exc}"
            continue
        n0, n1 = sobolev_norm(u0, s), sobolev_norm(Ku, s)
        rep.rows.append((a, n0, n1, n1 / n0))
    good = [r for r in rep.rows if math.isfinite(r[3]) and r[3] > 0]
    if len(good) >= 2:
        rep.slope, rep.slope_stderr = loglog_fit([r[0] for r in good], [r[3] for r in good])
    contracting = [r[0] for r in rep.rows if r[3] < 1]
    lo = max(contracting) if contracting else None
    above = [r[0] for r in rep.rows if not r[3] < 1 and (lo is None or r[0] > lo)]
    hi = min(above) if above else None
    if lo is not None and hi is not None:
        for _ in range(bisect_steps):
            mid = math.sqrt(lo * hi)
            if _factor_or_inf(base, mid, fam, T, S, cfg, s) < 1:
                lo = mid
            else:
                hi = mid
    rep.r0_interval = (lo, hi)
    return rep


def distance_to_excluded(S: ExcludedSet, T: float) -> tuple[int, float]:
    """(k, gap) where gap is the distance from T to the nearest removed interval over 1 <= k <= k_max."""
    best_k, best = 0, math.inf
    for k in range(1, S.k_max + 1):
        a = abs(S.symbol.psi_exact(k))
        th = reduced_phase(a, T)
        gap = (min(th, TWO_PI - th) - S.radius(k) * float(a)) / float(a)
        if gap < best:
            best_k, best = k, gap
    return best_k, best


def _sweep_row(args):
    fam, S, T, amplitude, s, cfg, base = args
    k, gap = distance_to_excluded(S, T)
    f = _factor_or_inf(base, amplitude, fam, T, S, cfg, s)
    return {"T": T, "factor": f, "nearest_k": k, "distance": gap}


def period_sweep(fam: EquationFamily, S: ExcludedSet, count: int, amplitude: float, s: float,
                 cfg: SolverConfig, seed: int, base: FourierField, workers: int = 1) -> list:
    """Rows {T, factor, nearest_k, distance} over sampled certified periods.

    Rows come back in sampling order whatever ``workers`` is, so output does
    not depend on the degree of parallelism.
    """
    jobs = [(fam, S, T, amplitude, s, cfg, base) for T in sample_periods(S, count, seed)]
    if workers <= 1 or len(jobs) <= 1:
        return [_sweep_row(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(_sweep_row, jobs))
