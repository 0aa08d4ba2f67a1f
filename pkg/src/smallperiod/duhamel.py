"""Normal form of the Duhamel integral.

For u_t = A u + c u u_x with A = i psi(k), the interaction-picture variable
v_k = exp(-i psi(k) t) u_k obeys

    dv_k/dt = (c/2) i k  sum'_j exp(-i Omega(k,j) t) v_{k-j} v_j,
    Omega(k,j) = psi(k) - psi(k-j) - psi(j).

The first-order part of psi cancels in Omega, and what is left factors:

    k^3 - (k-j)^3 - j^3 = 3 k j (k-j)
    k^5 - (k-j)^5 - j^5 = 5 k j (k-j) sigma,   sigma = k^2 - kj + j^2
    k^7 - (k-j)^7 - j^7 = 7 k j (k-j) tau,     tau = k^4 - 2k^2 (k-j) j + (k-j)^2 j^2

Integrating the phase by parts gives d/dt (v + B) = R (+ Q) with

    B_k = sum'_j  c k / (2 Omega) exp(-i Omega t) v_{k-j} v_j
    R_k = sum'_j  c k / Omega     exp(-i Omega t) v_{k-j} dv_j/dt
    Q_k = (c/2) i k sum_{Omega(k,j) = 0} v_{k-j} v_j      (Kawahara, theta < 0 only)

and hence the Duhamel term

    S_D(T)u0_k = exp(i psi(k) T) (B_k(0) - B_k(T) + int_0^T R_k + Q_k dt).

Because dv_j/dt is itself the full quadratic right-hand side, R is evaluated
as a single sum against it: mathematically identical to the double sum over
(j, l) but O(K^2) per time instead of O(K^3).  ``compute_R_double_sum`` keeps
the literal double sum as an oracle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.integrate import simpson

from .evolution import SolverConfig, Trajectory, solve
from .families import EquationFamily
from .spectrum import FourierField, half_product, sobolev_norm

_ORDER = {"fifth": 5, "kawahara": 5, "seventh": 7, "kdv": 3}


class IndexError_(ValueError):
    """Excluded index pair (k = 0, j = 0 or j = k)."""


# -- phase identities ---------------------------------------------------------

@dataclass(frozen=True)
class PhaseFactorization:
    name: str
    theta: Fraction = Fraction(0)

    @classmethod
    def of(cls, fam) -> "PhaseFactorization":
        if isinstance(fam, PhaseFactorization):
            return fam
        if isinstance(fam, str):
            return cls(fam)
        return cls(fam.name, Fraction(fam.theta))

    @property
    def order(self) -> int:
        return _ORDER[self.name]

    def resonance_function(self, k, j):
        """Factored form; exact for Python ints (and object arrays of them)."""
        m = k - j
        if self.name == "kdv":
            return 3 * k * j * m
        if self.name == "seventh":
            return 7 * m * j * k * tau(k, j)
        base = 5 * m * j * k * sigma(k, j)
        if self.name == "kawahara":
            # 5 k j (k-j) (sigma + 3 theta / 5)
            return base + 3 * self.theta * k * j * m
        return base

    def direct(self, k, j):
        """k^r - (k-j)^r - j^r, plus theta (k^3 - (k-j)^3 - j^3) for Kawahara."""
        r = self.order
        out = k**r - (k - j) ** r - j**r
        if self.name == "kawahara":
            out = out + self.theta * (k**3 - (k - j) ** 3 - j**3)
        return out


def sigma(k, j):
    return k * k - k * j + j * j


def tau(k, j):
    m = k - j
    return k**4 - 2 * k * k * m * j + m * m * j * j


def _admissible(k: int, j: int) -> None:
    if k == 0 or j == 0 or j == k:
        raise IndexError_(f"excluded index pair (k={k}, j={j})")


def phase_value(fam, k: int, j: int):
    """Exact factored phase at an admissible pair (int, or Fraction for Kawahara)."""
    _admissible(k, j)
    return PhaseFactorization.of(fam).resonance_function(int(k), int(j))


def _grid(kmax: int, dtype):
    r = np.arange(-kmax, kmax + 1).astype(dtype)
    K, J = np.meshgrid(r, r, indexing="ij")
    mask = (K != 0) & (J != 0) & (J != K)
    return K[mask], J[mask]


@dataclass(frozen=True)
class IdentityReport:
    kmax: int
    pairs: int
    failures: dict
    sums_of_squares_ok: bool

    @property
    def passed(self) -> bool:
        return self.sums_of_squares_ok and not any(self.failures.values())


def check_identities(kmax: int = 500) -> IdentityReport:
    """Exact check of the r = 3, 5, 7 factorisations and the half-sum forms of sigma, tau."""
    # int64 holds every value below order 7 for kmax <= 500; order 7 needs Python ints
    if kmax > 500:
        raise ValueError("identity scan is sized for kmax <= 500")
    k, j = _grid(kmax, np.int64)
    m = k - j
    failures = {}
    for name in ("kdv", "fifth"):
        f = PhaseFactorization(name)
        failures[name] = int(np.count_nonzero(f.direct(k, j) != f.resonance_function(k, j)))
    s, t = sigma(k, j), tau(k, j)
    ok = bool(np.all(2 * s == k**2 + m**2 + j**2) and np.all(2 * t == k**4 + m**4 + j**4))
    ko, jo = _grid(kmax, object)
    f = PhaseFactorization("seventh")
    failures["seventh"] = int(np.count_nonzero(f.direct(ko, jo) != f.resonance_function(ko, jo)))
    return IdentityReport(kmax, int(k.size), failures, ok)


@dataclass(frozen=True)
class DenominatorReport:
    kmax: int
    theta: Fraction
    maxima: dict
    bounds: dict
    passed: dict

    @property
    def all_passed(self) -> bool:
        return all(self.passed.values())


DENOMINATOR_BOUNDS = {"k2/sigma": 2, "k4/tau": 2, "k3/(j(k-j)sigma)": 4,
                      "k2/(kj(k-j))": 2, "k2/(sigma+3theta/5)": 2}


def denominator_bounds(kmax: int = 500, theta=Fraction(1, 2)) -> DenominatorReport:
    """Maxima of the derivative-gain ratios over admissible |k|, |j| <= kmax.

    Pass/fail is decided by integer cross-multiplication, so it is exact.
    """
    theta = Fraction(theta)
    r = np.arange(-kmax, kmax + 1, dtype=np.int64)
    K, J = np.meshgrid(r, r, indexing="ij")
    mask = (K != 0) & (J != 0) & (J != K)
    k, j = K[mask], J[mask]
    m = k - j
    s = k * k - k * j + j * j
    t = k**4 - 2 * k * k * m * j + m * m * j * j
    assert np.all(s > 0) and np.all(t > 0), "sigma and tau must be positive"
    num, den = theta.numerator, theta.denominator
    # 5 den (sigma + 3 theta / 5) = 5 den sigma + 3 num
    sk = 5 * den * s + 3 * num
    kf, jf, mf = (x.astype(float) for x in (k, j, m))
    sf, tf = s.astype(float), t.astype(float)
    maxima = {
        "k2/sigma": float(np.max(kf**2 / sf)),
        "k4/tau": float(np.max(kf**4 / tf)),
        "k3/(j(k-j)sigma)": float(np.max(np.abs(kf**3 / (jf * mf * sf)))),
        "k2/(kj(k-j))": float(np.max(np.abs(kf**2 / (kf * jf * mf)))),
    }
    passed = {
        "k2/sigma": bool(np.all(k * k <= 2 * s)),
        "k4/tau": bool(np.all(k**4 <= 2 * t)),
        "k3/(j(k-j)sigma)": bool(np.all(np.abs(k**3) <= 4 * np.abs(j * m * s))),
        "k2/(kj(k-j))": bool(np.all(k * k <= 2 * np.abs(k * j * m))),
    }
    if np.any(sk == 0):
        maxima["k2/(sigma+3theta/5)"] = math.inf
        passed["k2/(sigma+3theta/5)"] = False
    else:
        maxima["k2/(sigma+3theta/5)"] = float(np.max(kf**2 * 5 * den / np.abs(sk.astype(float))))
        passed["k2/(sigma+3theta/5)"] = bool(np.all(5 * den * k * k <= 2 * np.abs(sk)))
    return DenominatorReport(kmax, theta, maxima, dict(DENOMINATOR_BOUNDS), passed)


# -- B, R, Q --------------------------------------------------------------------

@dataclass(frozen=True)
class _Kernel:
    K: int
    kmj: np.ndarray    # index of k - j into the dense array (clipped where invalid)
    jidx: np.ndarray
    wb: np.ndarray     # c k / (2 Omega) on valid nonresonant pairs, else 0
    wq: np.ndarray     # (c/2) i k on resonant pairs, else 0
    resonant_pairs: tuple
    omega: np.ndarray  # Omega(k, j), 0 off the valid set and on resonant pairs


def _family_key(fam: EquationFamily):
    return (fam.name, fam.linear.terms, fam.nonlinear_coefficient, fam.theta)


@lru_cache(maxsize=32)
def _kernel_cached(key, K: int) -> _Kernel:
    name, terms, c, theta = key
    pf = PhaseFactorization(name, Fraction(theta))
    lead = Fraction(terms[0][0])
    ks = np.arange(1, K + 1)
    js = np.arange(-K, K + 1)
    kk, jj = np.meshgrid(ks, js, indexing="ij")
    mm = kk - jj
    valid = (np.abs(mm) <= K) & (jj != 0) & (jj != kk)
    omega = np.zeros(kk.shape)
    resonant = np.zeros(kk.shape, dtype=bool)
    res_pairs = []
    for a, b in zip(*np.nonzero(valid)):
        k, j = int(kk[a, b]), int(jj[a, b])
        w = lead * pf.resonance_function(k, j) if name != "kawahara" else pf.resonance_function(k, j)
        if w == 0:
            resonant[a, b] = True
            res_pairs.append((k, j))
        omega[a, b] = float(w)
    if res_pairs and name != "kawahara":
        raise ZeroDivisionError(f"resonant denominators {res_pairs[:4]} for family {name}")
    live = valid & ~resonant
    wb = np.zeros(kk.shape)
    wb[live] = c * kk[live] / (2.0 * omega[live])
    wq = np.zeros(kk.shape, dtype=complex)
    wq[resonant] = 0.5j * c * kk[resonant]
    kmj = np.clip(mm + K, 0, 2 * K)
    return _Kernel(K, kmj, jj + K, wb, wq, tuple(res_pairs), omega)


def kernel(fam: EquationFamily, K: int) -> _Kernel:
    return _kernel_cached(_family_key(fam), K)


def kawahara_exception_set(fam: EquationFamily, K: int) -> tuple:
    """Admissible (k, j), k >= 1, with Omega(k, j) = 0 (empty unless Kawahara with theta < 0)."""
    return kernel(fam, K).resonant_pairs


def _dense(half: np.ndarray) -> np.ndarray:
    return np.concatenate([np.conj(half[:0:-1]), half])


def _bilinear(ker: _Kernel, w: np.ndarray, a_half: np.ndarray, b_half: np.ndarray) -> np.ndarray:
    """sum_j w[k, j] a_{k-j} b_j for k = 1..K, returned as a half array (entry 0 = 0)."""
    a, b = _dense(a_half), _dense(b_half)
    out = np.zeros(ker.K + 1, dtype=complex)
    out[1:] = np.sum(w * a[ker.kmj] * b[ker.jidx], axis=1)
    return out


def _nonlinear_u(u_half: np.ndarray, c: float) -> np.ndarray:
    K = u_half.shape[0] - 1
    return 0.5j * c * np.arange(K + 1) * half_product(u_half, u_half)


def _phases(fam: EquationFamily, t, K: int) -> np.ndarray:
    from .symbols import reduced_phases
    return np.exp(1j * reduced_phases(fam.linear, t, K))


# All three act on u = E v; the exp(-i Omega t) factor is then
# conj(E_k) E_{k-j} E_j, so only per-mode exact phases are needed.

def _B_u(ker, fam, u):
    return _bilinear(ker, ker.wb, u, u)


def _R_u(ker, fam, u):
    return _bilinear(ker, 2.0 * ker.wb, u, _nonlinear_u(u, fam.nonlinear_coefficient))


def _Q_u(ker, fam, u):
    if not ker.resonant_pairs:
        return np.zeros_like(u)
    return _bilinear(ker, ker.wq, u, u)


def _in_v_frame(fam, t, v_half, op):
    K = v_half.shape[0] - 1
    E = _phases(fam, t, K)
    out = np.conj(E) * op(kernel(fam, K), fam, E * v_half)
    out[0] = 0.0
    return out


def compute_B(v: FourierField, t, fam: EquationFamily) -> FourierField:
    return FourierField.from_half(_in_v_frame(fam, t, v.half, _B_u))


def compute_R(v: FourierField, t, fam: EquationFamily) -> FourierField:
    return FourierField.from_half(_in_v_frame(fam, t, v.half, _R_u))


def compute_Q(v: FourierField, t, fam: EquationFamily) -> FourierField:
    return FourierField.from_half(_in_v_frame(fam, t, v.half, _Q_u))


def compute_R_double_sum(v: FourierField, t, fam: EquationFamily) -> FourierField:
    """Literal double sum  sum'_j sum'_l (c k/Omega(k,j)) e^{-i Omega(k,j) t} v_{k-j} (c/2) i j e^{-i Omega(j,l) t} v_{j-l} v_l.

    O(K^3); kept as an independent oracle for ``compute_R``.
    """
    K = v.K
    c = fam.nonlinear_coefficient
    psi = {k: fam.linear.psi_exact(k) for k in range(-K, K + 1)}
    from .symbols import reduced_phase
    ph = {k: reduced_phase(psi[k], Fraction(t) if not isinstance(t, Fraction) else t) for k in psi}
    vd = {k: v[k] for k in range(-K, K + 1)}

    def e(k, j):  # exp(-i Omega(k, j) t)
        return complex(np.exp(-1j * (ph[k] - ph[k - j] - ph[j])))

    out = np.zeros(K + 1, dtype=complex)
    for k in range(1, K + 1):
        acc = 0j
        for j in range(k - K, K + 1):
            if j == 0 or j == k:
                continue
            om = float(psi[k] - psi[k - j] - psi[j])
            if om == 0:
                continue
            inner = 0j
            for l in range(j - K, K + 1):
                if abs(l) > K or abs(j - l) > K or l == 0 or l == j:
                    continue
                inner += e(j, l) * vd[j - l] * vd[l]
            acc += c * k / om * e(k, j) * vd[k - j] * 0.5j * c * j * inner
        out[k] = acc
    return FourierField.from_half(out)


# -- S_D(T) u0 ------------------------------------------------------------------


def _filon_quadratic(theta):
    """Normalised moments int_{-1}^{1} x^n exp(-i theta x) dx for n = 0, 1, 2."""
    th = np.asarray(theta, float)
    small = np.abs(th) < 1e-2
    t = np.where(small, 1.0, th)
    s, c = np.sin(t), np.cos(t)
    i0 = 2 * s / t
    i1 = -2j * (s - t * c) / t**2
    i2 = 2 * ((t * t - 2) * s + 2 * t * c) / t**3
    q = th * th
    i0 = np.where(small, 2 * (1 - q / 6 + q * q / 120), i0)
    i1 = np.where(small, -2j * th * (1 / 3 - q / 30 + q * q / 840), i1)
    i2 = np.where(small, 2 * (1 / 3 - q / 10 + q * q / 168), i2)
    return i0, i1, i2


def filon_weights(omega, h):
    """Weights (w0, w1, w2) with int_{-h}^{h} exp(-i omega s) P(s) ds = w0 P(-h) + w1 P(0) + w2 P(h)
    for quadratic P; they reduce to Simpson's (h/3, 4h/3, h/3) as omega -> 0."""
    i0, i1, i2 = _filon_quadratic(np.asarray(omega, float) * h)
    return h * (i2 - i1) / 2, h * (i0 - i2), h * (i2 + i1) / 2


def filon_linear_weights(omega, h):
    """Weights (w0, w1) for int_0^h exp(-i omega s) L(s) ds with L linear."""
    th = np.asarray(omega, float) * h
    small = np.abs(th) < 1e-2
    t = np.where(small, 1.0, th)
    e = np.exp(-1j * t)
    j0 = (1 - e) / (1j * t)
    j1 = (e * (1 + 1j * t) - 1) / t**2
    q = th * th
    j0 = np.where(small, 1 - 1j * th / 2 - q / 6 + 1j * th * q / 24 + q * q / 120 - 1j * th * q * q / 720, j0)
    j1 = np.where(small, 0.5 - 1j * th / 3 - q / 8 + 1j * th * q / 30 + q * q / 144 - 1j * th * q * q / 840, j1)
    return h * (j0 - j1), h * j1


def _rq_amplitudes(ker, fam, traj, i):
    """Per-pair integrand of R + Q at snapshot i with the exp(-i Omega t) factor stripped."""
    v = traj.v[i]
    E = traj.phases(i)
    D = np.conj(E) * _nonlinear_u(E * v, fam.nonlinear_coefficient)
    vd, Dd = _dense(v), _dense(D)
    amp = 2.0 * ker.wb * vd[ker.kmj] * Dd[ker.jidx]
    if ker.resonant_pairs:
        amp = amp + ker.wq * vd[ker.kmj] * vd[ker.jidx]
    return amp


def _pair_phase(ker, traj, i):
    """exp(-i Omega(k, j) t_i) from the exact per-mode phases."""
    Ed = _dense(traj.phases(i))
    return np.conj(Ed[ker.K + 1:])[:, None] * Ed[ker.kmj] * Ed[ker.jidx]


def _integral_filon(ker, fam, traj):
    t = traj.times
    n = len(t)
    out = np.zeros(ker.K, dtype=complex)
    i = 0
    cache = {}

    def amp(m):
        if m not in cache:
            cache.clear() if len(cache) > 3 else None
            cache[m] = _rq_amplitudes(ker, fam, traj, m)
        return cache[m]

    while i < n - 1:
        h0 = t[i + 1] - t[i]
        if i + 2 < n and math.isclose(t[i + 2] - t[i + 1], h0, rel_tol=1e-9):
            w0, w1, w2 = filon_weights(ker.omega, h0)
            acc = w0 * amp(i) + w1 * amp(i + 1) + w2 * amp(i + 2)
            out += np.sum(_pair_phase(ker, traj, i + 1) * acc, axis=1)
            i += 2
        else:
            w0, w1 = filon_linear_weights(ker.omega, h0)
            acc = w0 * amp(i) + w1 * amp(i + 1)
            out += np.sum(_pair_phase(ker, traj, i) * acc, axis=1)
            i += 1
    return out


def _integral_simpson(ker, fam, traj):
    n = len(traj.steps)
    integrand = np.empty((n, ker.K), dtype=complex)
    for i in range(n):
        E = traj.phases(i)
        u = E * traj.v[i]
        val = _R_u(ker, fam, u)
        if ker.resonant_pairs:
            val = val + _Q_u(ker, fam, u)
        integrand[i] = (np.conj(E) * val)[1:]
    return simpson(integrand, x=traj.times, axis=0)


QUADRATURES = {"filon": _integral_filon, "simpson": _integral_simpson}


def normalform_from_trajectory(traj: Trajectory, quadrature: str = "filon") -> np.ndarray:
    """exp(i psi T)(B(0) - B(T) + int R + Q) from stored v-snapshots (half array).

    ``filon`` integrates each pair's known phase exactly against a quadratic
    interpolant of its amplitude; ``simpson`` applies composite Simpson to the
    summed integrand and loses accuracy once |Omega| dt is of order one.
    """
    if quadrature not in QUADRATURES:
        raise ValueError(f"unknown quadrature {quadrature!r}; choose from {sorted(QUADRATURES)}")
    fam = traj.family
    K = traj.K
    ker = kernel(fam, K)
    n = len(traj.steps)
    integral = np.zeros(K + 1, dtype=complex)
    integral[1:] = QUADRATURES[quadrature](ker, fam, traj)
    b0 = np.conj(traj.phases(0)) * _B_u(ker, fam, traj.u_half(0))
    bT = np.conj(traj.phases(n - 1)) * _B_u(ker, fam, traj.u_half(n - 1))
    out = traj.phases(n - 1) * (b0 - bT + integral)
    out[0] = 0.0
    return out


def quadrature_halving(traj: Trajectory, quadrature: str = "filon") -> float:
    """Relative l2 change of the normal-form estimate when every other snapshot is dropped."""
    full = normalform_from_trajectory(traj, quadrature)
    keep = np.arange(0, len(traj.steps), 2)
    if keep[-1] != len(traj.steps) - 1:
        keep = np.append(keep, len(traj.steps) - 1)
    coarse = Trajectory(traj.family, traj.cfg, traj.T, traj.n_steps, traj.steps[keep], traj.v[keep])
    diff = np.linalg.norm(normalform_from_trajectory(coarse, quadrature) - full)
    ref = np.linalg.norm(full)
    return float(diff / ref) if ref else float(diff)


def duhamel_normalform(u0: FourierField, fam: EquationFamily, T: float, cfg: SolverConfig,
                       quadrature: str = "filon") -> FourierField:
    if u0.is_zero():
        return FourierField.zeros(u0.K)
    return FourierField.from_half(normalform_from_trajectory(solve(u0, fam, T, cfg), quadrature))


def duhamel_direct(u0: FourierField, fam: EquationFamily, T: float, cfg: SolverConfig) -> FourierField:
    """u(T) - S_L(T) u0, formed in v-variables so the linear part cancels exactly."""
    if u0.is_zero():
        return FourierField.zeros(u0.K)
    cfg = SolverConfig(**{**cfg.__dict__, "snapshot_stride": 10**9})
    return FourierField.from_half(solve(u0, fam, T, cfg).duhamel_half())


# -- smoothing ladders ----------------------------------------------------------

def loglog_fit(x, y):
    """Slope and its standard error for log y = a log x + b."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    if x.size < 2 or np.any(~np.isfinite(x)) or np.any(~np.isfinite(y)) or np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("log-log fit needs at least two finite, strictly positive points")
    lx, ly = np.log(x), np.log(y)
    if np.ptp(lx) == 0:
        raise ValueError("degenerate ladder: all abscissae equal")
    if x.size < 4:
        return float(np.polyfit(lx, ly, 1)[0]), float("nan")
    coef, cov = np.polyfit(lx, ly, 1, cov=True)
    return float(coef[0]), float(math.sqrt(max(cov[0, 0], 0.0)))


@dataclass
class SmoothingReport:
    family: str
    s: float
    p: float
    p_tilde: float
    q: float
    T: float
    rows: list = field(default_factory=list)   # (amplitude, |u0|_s, |u0|_{s+pt}, |S_D|_{s+p}, ratio)
    exponent: float = float("nan")
    exponent_stderr: float = float("nan")
    eta: float = float("nan")
    error: str | None = None

    @property
    def ratio_spread(self) -> float:
        r = [row[4] for row in self.rows]
        return max(r) / min(r) if r else float("nan")

    def to_dict(self) -> dict:
        return {"family": self.family, "s": self.s, "p": self.p, "p_tilde": self.p_tilde, "q": self.q,
                "T": self.T, "eta": self.eta, "exponent": self.exponent,
                "exponent_stderr": self.exponent_stderr, "ratio_spread": self.ratio_spread,
                "error": self.error,
                "rows": [dict(zip(("amplitude", "norm_s", "norm_s_pt", "sd_norm", "ratio"), r))
                         for r in self.rows]}


def smoothing_report(fam: EquationFamily, s, p, p_tilde, q, T, amplitudes, cfg: SolverConfig,
                     base: FourierField, method: str = "direct") -> SmoothingReport:
    """Run u0 = a * base for each a in a strictly decreasing ladder and fit |S_D|_{s+p} against |u0|_s."""
    amps = [float(a) for a in amplitudes]
    if not amps or any(a <= 0 for a in amps):
        raise ValueError("amplitude ladder must be nonempty and strictly positive")
    if any(b >= a for a, b in zip(amps, amps[1:])):
        raise ValueError("amplitude ladder must be strictly decreasing")
    if base.is_zero():
        raise ValueError("degenerate ladder: base field is zero")
    rep = SmoothingReport(fam.name, s, p, p_tilde, q, float(T), eta=amps[0] * sobolev_norm(base, s))
    run = duhamel_direct if method == "direct" else duhamel_normalform
    from .evolution import SolverError
    for a in amps:
        u0 = a * base
        try:
            sd = run(u0, fam, T, cfg)
        except SolverError as exc:
            rep.error = f"amplitude {a:g}: {exc}"
            return rep
        ns, npt, nsd = sobolev_norm(u0, s), sobolev_norm(u0, s + p_tilde), sobolev_norm(sd, s + p)
        rep.rows.append((a, ns, npt, nsd, nsd / (ns * npt**q)))
    rep.exponent, rep.exponent_stderr = loglog_fit([r[1] for r in rep.rows], [r[3] for r in rep.rows])
    return rep
