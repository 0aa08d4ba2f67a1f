"""Numerical toolkit for small time-periodic solutions of periodic dispersive PDEs.

Modules
-------
spectrum      truncated mean-zero Fourier fields, Sobolev norms, products
symbols       dispersion symbols, propagator and inverse-factor multipliers
smalldivisor  excluded period sets, constants c0/c1, bound certification
families      the four equation families (fifth, Kawahara, seventh, KdV)
evolution     integrating-factor RK4 solver and monitors
duhamel       normal-form (B, R) evaluation of the Duhamel integral
fixedpoint    the operator K(T) = (I - S_L(T))^{-1} S_D(T) and contraction scans
cli           command line entry point
"""

__version__ = "0.1.0"
