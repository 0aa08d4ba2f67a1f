"""Integrating-factor RK4 for u_t = A u + c u u_x on mean-zero periodic fields.

The solver works in the variable v_k = exp(-i psi(k) t) u_k, which removes the
stiff dispersive part exactly:

    dv_k/dt = exp(-i psi(k) t) * c * (ik/2) * (u^2)_k,   u_k = exp(i psi(k) t) v_k.

Products are formed on a zero-padded grid of 3K+1 points, so the truncated
(Galerkin) system is integrated without aliasing.  Snapshots are stored in v
form; u is reconstructed on demand.

Time levels are exact rationals t_n = n T / N.  The phase factors are advanced
by precomputed half-step multipliers and re-synchronised every few steps from
an exact reduction of psi(k) t_n modulo 2*pi.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .families import EquationFamily
from .spectrum import FourierField, half_sobolev_norm, padded_grid_size
from .symbols import reduced_phases

RESYNC_EVERY = 32


class SolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    K: int = 64
    dt: float = 1e-3
    scheme: str = "IFRK4"
    dealias: bool = True
    snapshot_stride: int = 1
    cfl_safety: float = 0.5
    growth_limit: float = 10.0

    def __post_init__(self):
        if self.scheme != "IFRK4":
            raise ValueError(f"unsupported scheme {self.scheme!r}")
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ValueError("dt must be positive")
        if self.K < 1 or self.snapshot_stride < 1:
            raise ValueError("K and snapshot_stride must be >= 1")


@dataclass
class Trajectory:
    family: EquationFamily
    cfg: SolverConfig
    T: float
    n_steps: int
    steps: np.ndarray          # step index of each snapshot
    v: np.ndarray = field(repr=False)  # (n_snap, K+1) half arrays in v form

    @property
    def K(self) -> int:
        return self.v.shape[1] - 1

    @property
    def h(self) -> Fraction:
        return Fraction(self.T) / self.n_steps

    @property
    def times(self) -> np.ndarray:
        return self.steps * (self.T / self.n_steps)

    def exact_time(self, i: int) -> Fraction:
        return self.h * int(self.steps[i])

    def phases(self, i: int) -> np.ndarray:
        return np.exp(1j * reduced_phases(self.family.linear, self.exact_time(i), self.K))

    def u_half(self, i: int) -> np.ndarray:
        out = self.phases(i) * self.v[i]
        out[0] = 0.0
        return out

    def v_field(self, i: int) -> FourierField:
        return FourierField.from_half(self.v[i])

    def u_field(self, i: int) -> FourierField:
        return FourierField.from_half(self.u_half(i))

    def final(self) -> FourierField:
        return self.u_field(len(self.steps) - 1)

    def duhamel_half(self) -> np.ndarray:
        """S_D(T) u0 = exp(i psi T) (v(T) - v(0))."""
        out = self.phases(len(self.steps) - 1) * (self.v[-1] - self.v[0])
        out[0] = 0.0
        return out


def _nonlinear_rhs(K: int, c: float, dealias: bool):
    M = padded_grid_size(K) if dealias else 2 * K + 1
    coef = 0.5j * c * np.arange(K + 1)

    def rhs(v, E):
        u = E * v
        phys = np.fft.irfft(u, n=M)
        sq = np.fft.rfft(phys * phys)[: K + 1] * M
        return np.conj(E) * (coef * sq)

    return rhs


def solve(u0: FourierField, family: EquationFamily, T: float, cfg: SolverConfig) -> Trajectory:
    """Integrate from u0 to time T; snapshots every ``cfg.snapshot_stride`` steps plus the last."""
    if not T > 0:
        raise ValueError("T must be positive")
    if u0.K != cfg.K:
        raise ValueError(f"field truncation K={u0.K} does not match solver K={cfg.K}")
    K = cfg.K
    N = max(1, math.ceil(T / cfg.dt - 1e-9))
    h = T / N
    hq = Fraction(T) / N
    c = family.nonlinear_coefficient

    v = u0.half
    umax = float(np.max(np.abs(u0.grid_values(padded_grid_size(K))))) if not u0.is_zero() else 0.0
    if c != 0 and umax > 0 and h * K * umax > cfg.cfl_safety:
        raise SolverError(f"dt={h:.3g} violates the nonlinear CFL bound "
                          f"{cfg.cfl_safety / (K * umax):.3g} (K={K}, max|u0|={umax:.3g})")

    snap_idx = list(range(0, N + 1, cfg.snapshot_stride))
    if snap_idx[-1] != N:
        snap_idx.append(N)
    out = np.empty((len(snap_idx), K + 1), dtype=complex)
    out[0] = v
    traj = Trajectory(family, cfg, float(T), N, np.array(snap_idx), out)
    if c == 0 or u0.is_zero():
        out[:] = v
        return traj

    A = family.linear
    rhs = _nonlinear_rhs(K, c, cfg.dealias)
    E_half = np.exp(1j * reduced_phases(A, hq / 2, K))
    norm0 = half_sobolev_norm(v, 1)
    E = np.ones(K + 1, dtype=complex)
    j = 1
    for n in range(N):
        if n % RESYNC_EVERY == 0 and n:
            E = np.exp(1j * reduced_phases(A, hq * n, K))
        k1 = rhs(v, E)
        Em = E * E_half
        k2 = rhs(v + 0.5 * h * k1, Em)
        k3 = rhs(v + 0.5 * h * k2, Em)
        E = Em * E_half
        k4 = rhs(v + h * k3, E)
        v = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        v[0] = 0.0
        if n + 1 == snap_idx[j]:
            if not np.all(np.isfinite(v)):
                raise SolverError(f"non-finite state at t={(n + 1) * h:.6g}")
            if half_sobolev_norm(v, 1) > cfg.growth_limit * norm0:
                raise SolverError(f"H^1 norm grew more than {cfg.growth_limit}x by t={(n + 1) * h:.6g}")
            out[j] = v
            j += 1
    return traj


def reduce_mean(g_tilde_half, family: EquationFamily):
    """Split data with arbitrary mean into (mean-zero field, shifted family, mean).

    ``g_tilde_half`` holds coefficients k = 0..K; entry 0 is the mean.
    """
    h = np.asarray(g_tilde_half, dtype=complex).copy()
    mean = float(h[0].real)
    if h[0].imag != 0:
        raise ValueError("the mean of a real field must be real")
    h[0] = 0.0
    return FourierField.from_half(h), family.shifted_mean(mean), mean


def restore_mean(u: FourierField, mean: float) -> np.ndarray:
    """Half array of u~ = u + mean."""
    h = u.half
    h[0] = mean
    return h


def conserved_diagnostics(traj: Trajectory) -> list:
    """Rows (t, mean, L2 norm, H^6 norm, energy) with energy = (|u|_L2^2 + |u|_H6^2) / 2."""
    rows = []
    for t, v in zip(traj.times, traj.v):
        l2 = half_sobolev_norm(v, 0)
        h6 = half_sobolev_norm(v, 6)
        rows.append({"t": float(t), "mean": float(abs(v[0])), "l2": l2, "h6": h6,
                     "energy": 0.5 * (l2 * l2 + h6 * h6)})
    return rows


@dataclass(frozen=True)
class DoublingReport:
    passed: bool
    first_violation_time: float | None
    max_ratio: float


def doubling_time_check(traj: Trajectory, u0: FourierField, s: float = 6) -> DoublingReport:
    """Is |u(t)|_{H^s} <= 2 |u0|_{H^s} at every snapshot?"""
    n0 = half_sobolev_norm(u0.half, s)
    if n0 == 0:
        return DoublingReport(True, None, 0.0)
    ratios = np.array([half_sobolev_norm(v, s) for v in traj.v]) / n0
    bad = np.nonzero(ratios > 2.0)[0]
    first = float(traj.times[bad[0]]) if bad.size else None
    return DoublingReport(first is None, first, float(ratios.max()))
