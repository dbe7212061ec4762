"""Closed-form explosion time and critical moments for classical Heston.

For alpha = 1 the moment explosion time has the explicit form of Andersen &
Piterbarg (2007): with e0 = c2/2 and e1 = e0^2 - c3*c1,

    T1*(u) = (pi/2 - arctan(e0/sqrt(-e1))) / sqrt(-e1)        if e1 < 0
           = log((e0 + sqrt(e1)) / (e0 - sqrt(e1))) / (2 sqrt(e1))
                                                   if e1 >= 0 and e0 > 0
           = infinity                              otherwise,

valid when R(u, .) has no root on [0, inf); when it does (cases C and D)
the time is infinite.  Critical moments u-(T) < 0 and u+(T) > 1 solve
T1*(u) = T and are obtained by bracketed root finding; T1* is strictly
monotone on each side of the finite-explosion region.

These functions ignore params.alpha; they serve both as a standalone
classical toolkit and as the alpha -> 1 degeneration check for the rough
algorithms.
"""

from __future__ import annotations

import math
import warnings

from scipy.optimize import brentq

from .model import ModelParams, MomentCase, classify, riccati_coeffs

_U_TOL = 1e-10


def explosion_time(params: ModelParams, u: float) -> float:
    """Classical explosion time T1*(u); returns math.inf in cases C and D."""
    case = classify(params, u)
    if case in (MomentCase.C, MomentCase.D):
        return math.inf
    rc = riccati_coeffs(params, u)
    if rc.e1 < 0.0:
        s = math.sqrt(-rc.e1)
        return (0.5 * math.pi - math.atan(rc.e0 / s)) / s
    # case A with e1 >= 0 forces e0 > sqrt(e1) since e1 = e0^2 - c3*c1 < e0^2
    if rc.e1 == 0.0:
        return 1.0 / rc.e0  # limit of the log branch
    s = math.sqrt(rc.e1)
    return math.log((rc.e0 + s) / (rc.e0 - s)) / (2.0 * s)


def e1_sign_change_points(params: ModelParams) -> tuple[float, float]:
    """Roots (r_lo < 0 < r_hi) of e1(u) = 0.

    e1 is a downward parabola in u with roots of opposite signs for every
    valid parameter set; e1 >= 0 exactly on [r_lo, r_hi].
    """
    xi2 = params.xi * params.xi
    a = xi2 * (params.rho * params.rho - 1.0)
    b = xi2 - 2.0 * params.rho * params.xi * params.lam
    c = params.lam * params.lam
    disc = math.sqrt(b * b - 4.0 * a * c)
    # a < 0: stable quadratic formula, roots have opposite signs
    q = -0.5 * (b + math.copysign(disc, b))
    r1, r2 = q / a, c / q
    return (min(r1, r2), max(r1, r2))


def _finite_boundary(params: ModelParams, side: str) -> float:
    """Endpoint of the finite-explosion region on the requested side.

    T1* tends to infinity as u approaches this point from inside the region.
    """
    r_lo, r_hi = e1_sign_change_points(params)
    if side == "lower":
        return r_lo
    if params.rho > 0.0:
        boundary = params.lam / params.rho / params.xi
        if boundary <= 1.0:
            # case A covers all of u > 1, explosion time diverges at u = 1
            return 1.0
    return r_hi


def critical_moment(params: ModelParams, T: float, side: str) -> float:
    """Root u of T1*(u) = T with u < 0 (side="lower") or u > 1 ("upper").

    Bracketed root finding; the bracket is guaranteed by the strict
    monotonicity of T1* on each side.  For maturities so large that the root
    is within floating-point resolution of the finite-region boundary, the
    boundary moment is returned and a warning is issued.
    """
    if side not in ("lower", "upper"):
        raise ValueError(f"side must be 'lower' or 'upper', got {side!r}")
    if not T > 0.0:
        raise ValueError(f"T={T} must be positive")
    boundary = _finite_boundary(params, side)
    sign = -1.0 if side == "lower" else 1.0

    # move from the boundary into the finite region until T1* exceeds T
    gap = 1e-3 * max(1.0, abs(boundary))
    near = boundary + sign * gap
    while explosion_time(params, near) <= T:
        gap *= 0.125
        near = boundary + sign * gap
        if near == boundary:
            warnings.warn(
                "critical moment at the boundary of the finite-explosion "
                f"region (u={boundary}); maturity T={T} too large to resolve",
                RuntimeWarning,
            )
            return boundary

    # expand geometrically away from the boundary until T1* drops below T
    far = boundary + sign * max(1.0, abs(boundary))
    while explosion_time(params, far) >= T:
        far = boundary + 2.0 * (far - boundary)

    lo, hi = (far, near) if side == "lower" else (near, far)
    return brentq(lambda u: explosion_time(params, u) - T, lo, hi, xtol=_U_TOL)
