"""The four mean-zero equation families.

Each family is ``u_t = A u + c * u u_x`` with ``A`` a dispersive symbol
``i psi(k)`` and ``c`` the nonlinear coefficient:

=========  ==========================================  =====
name       psi(k)                                      c
=========  ==========================================  =====
fifth      k^5 + omega k                               -2
kawahara   k^5 + theta k^3 - 2 alpha k                 -2
seventh    -k^7 - 2 alpha k                            -2
kdv        k^3 - alpha k                               -1
=========  ==========================================  =====

``alpha`` is the spatial mean that was subtracted from the data; ``omega``
already contains it for the fifth-order family (omega = omega~ - 2 mean).
The Kawahara sign convention follows ``u_t = u_5x - theta u_3x - ...`` so
theta > 0 never resonates; theta = -m^2 does and is rejected.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .symbols import LinearSymbol, SymbolError, preset_symbol, witness_for

FAMILY_NAMES = ("fifth", "kawahara", "seventh", "kdv")
_ORDERS = {"fifth": (5, 1), "kawahara": (5, 3, 1), "seventh": (7, 1), "kdv": (3, 1)}


@dataclass(frozen=True)
class EquationFamily:
    name: str
    linear: LinearSymbol
    nonlinear_coefficient: float
    theta: float = 0.0
    alpha: float = 0.0
    omega: float = 0.0

    def __post_init__(self):
        if self.name not in FAMILY_NAMES:
            raise SymbolError(f"unknown family {self.name!r}")
        if self.linear.orders != _ORDERS[self.name]:
            raise SymbolError(f"{self.name} needs orders {_ORDERS[self.name]}, got {self.linear.orders}")
        if self.name == "kawahara" and kawahara_resonant(self.theta):
            raise SymbolError(f"Kawahara theta={self.theta} resonates: k^5 + theta k^3 = 0 for some k")

    # The phase k -> psi(k) - psi(k-j) - psi(j) only sees orders >= 3.
    @property
    def leading_coefficient(self) -> float:
        return self.linear.terms[0][0]

    def linear_only(self) -> "EquationFamily":
        return replace(self, nonlinear_coefficient=0.0)

    def reversed(self) -> "EquationFamily":
        """The equation for w(s) = u(T - s)."""
        return replace(self, linear=self.linear.negated(),
                       nonlinear_coefficient=-self.nonlinear_coefficient)

    def shifted_mean(self, mean: float) -> "EquationFamily":
        """Family for u = u~ - mean: first-order coefficient gains c * mean."""
        if mean == 0:
            return self
        c = self.nonlinear_coefficient
        terms = [list(t) for t in self.linear.terms]
        terms[-1][0] += c * mean
        kw = {}
        if self.name == "fifth":
            kw["omega"] = self.omega + c * mean
        else:
            kw["alpha"] = self.alpha + mean
        return replace(self, linear=LinearSymbol(tuple(map(tuple, terms))), **kw)

    def hypotheses_boxes(self) -> list:
        """Coefficient boxes for (H), uniform in the mean shift, always containing the actual coefficients."""
        coeffs = self.linear.coefficients
        if self.name == "kawahara":
            abar = kawahara_alpha_bar(self.theta)
            lower = (-2.0 * abar, 2.0 * abar)
            boxes = [(1.0, 1.0), (self.theta, self.theta), lower]
        elif self.name == "seventh":
            boxes = [(-1.0, -1.0), (-0.5, 0.5)]
        else:
            boxes = [(1.0, 1.0), (-0.5, 0.5)]
        return [(min(lo, a), max(hi, a)) for (lo, hi), a in zip(boxes, coeffs)]

    def witness(self, k_scan_limit: int = 1000):
        return witness_for(self.linear, self.hypotheses_boxes(), k_scan_limit)

    def describe(self) -> dict:
        return {"name": self.name, "terms": [list(t) for t in self.linear.terms],
                "nonlinear_coefficient": self.nonlinear_coefficient,
                "theta": self.theta, "alpha": self.alpha, "omega": self.omega}


def kawahara_resonant(theta: float) -> bool:
    if theta >= 0 or not float(-theta).is_integer():
        return False
    m = math.isqrt(int(-theta))
    return m * m == int(-theta)


def kawahara_alpha_bar(theta: float) -> float:
    """min_k |k^4 + theta k^2| / 4, so |psi(k)| >= |k| min / 2 whenever |alpha| <= alpha_bar."""
    kmax = int(math.isqrt(int(abs(theta)))) + 3
    m = min(abs(k**4 + theta * k**2) for k in range(1, kmax + 1))
    return m / 4.0


def fifth(omega: float = 0.0, alpha: float = 0.0) -> EquationFamily:
    w = omega - 2.0 * alpha
    return EquationFamily("fifth", preset_symbol("fifth", w), -2.0, omega=w)


def kawahara(theta: float = 0.5, alpha: float = 0.0) -> EquationFamily:
    return EquationFamily("kawahara", preset_symbol("kawahara", theta, alpha), -2.0,
                          theta=theta, alpha=alpha)


def seventh(alpha: float = 0.0) -> EquationFamily:
    return EquationFamily("seventh", preset_symbol("seventh", alpha), -2.0, alpha=alpha)


def kdv(alpha: float = 0.0) -> EquationFamily:
    return EquationFamily("kdv", preset_symbol("kdv", alpha), -1.0, alpha=alpha)


def make_family(name: str, theta: float = 0.5, alpha: float = 0.0, omega: float = 0.0) -> EquationFamily:
    name = name.lower()
    if name == "fifth":
        return fifth(omega, alpha)
    if name == "kawahara":
        return kawahara(theta, alpha)
    if name == "seventh":
        return seventh(alpha)
    if name == "kdv":
        return kdv(alpha)
    raise SymbolError(f"unknown family {name!r}")
