"""Explicit lower and upper bounds for the moment explosion time.

Valid in cases A and B.  Both bounds are integrals of the blow-up criterion
of the Volterra comparison argument:

    lower = Gamma(1+alpha)^(1/alpha) * K(alpha)
            * integral_a^inf (w / G(u, w))^(1/alpha) dw/w,
    upper = 4 * Gamma(1+alpha)^(1/alpha)
            * integral_0^inf (w / Ghat(u, w))^(1/alpha) dw/w,

where a = 0 in case A and a = -e0 > 0 in case B, K(alpha) is the maximum of
(r^alpha - 1)^(1/alpha) / (r (r - 1)) over r > 1, and Ghat replaces G by its
floor -e1 on [0, -e0) in case B (G is decreasing there).  In case A the lower
bound is sharp in the limit alpha -> 1, where it reduces to the classical
explosion-time integral.

The improper integrals are mapped to (0, 1) by w = a + x/(1-x) and handled by
adaptive Gauss-Kronrod quadrature (scipy's QUADPACK); the r-maximization uses
golden-section search on log r.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.integrate import quad

from .model import CaseError, ModelParams, MomentCase, classify, riccati_coeffs

_QUAD_TOL = 1e-10
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class BoundsConsistencyError(RuntimeError):
    """Lower bound exceeded upper bound: a quadrature/optimization bug."""


@dataclass(frozen=True)
class BoundSpec:
    """Integration setup for the bounds: lower limit and the case-B floor."""

    a_lower: float
    ghat_floor: float | None


def bound_spec(params: ModelParams, u: float) -> BoundSpec:
    """Integration lower limit a(u) and the constant floor of Ghat."""
    case = classify(params, u)
    rc = riccati_coeffs(params, u)
    if case is MomentCase.A:
        return BoundSpec(a_lower=0.0, ghat_floor=None)
    if case is MomentCase.B:
        return BoundSpec(a_lower=-rc.e0, ghat_floor=-rc.e1)
    raise CaseError(f"bounds require case A or B, got {case} at u={u}")


def growth_factor(alpha: float) -> float:
    """max over r > 1 of (r^alpha - 1)^(1/alpha) / (r (r - 1)).

    The objective vanishes at both ends of (1, inf) and is unimodal between;
    golden-section search on log r, tolerance 1e-10.  At alpha = 1 the
    supremum is 1, approached as r decreases to 1, and is returned exactly.
    """
    if alpha == 1.0:
        return 1.0
    inv_alpha = 1.0 / alpha

    def value(log_r: float) -> float:
        r = math.exp(log_r)
        return (r**alpha - 1.0) ** inv_alpha / (r * (r - 1.0))

    lo, hi = math.log1p(1e-9), math.log(1e3)
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = value(x1), value(x2)
    while hi - lo > 1e-10:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = value(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = value(x1)
    return value(0.5 * (lo + hi))


def _tail_integral(params: ModelParams, u: float, a: float) -> tuple[float, float]:
    """integral_a^inf w^(1/alpha - 1) G(u, w)^(-1/alpha) dw and its error estimate.

    The variable is first normalized by the root scale of G (w = sigma * v
    with sigma ~ |e0| + sqrt(|e1|)), which keeps the integrand of order one
    for moments of any magnitude and pulls out a factor sigma^(-1/alpha).
    The substitution v = a/sigma + x/(1-x) then maps the improper range to
    (0, 1) for adaptive Gauss-Kronrod quadrature; the integrand decays like
    v^(-1/alpha - 1) at infinity and is integrable at the lower limit since
    G(u, a) > 0 in cases A and B.
    """
    rc = riccati_coeffs(params, u)
    inv_alpha = 1.0 / params.alpha
    sigma = max(1.0, abs(rc.e0) + math.sqrt(abs(rc.e1)))
    e0n = rc.e0 / sigma
    e1n = rc.e1 / (sigma * sigma)
    an = a / sigma

    def integrand(x: float) -> float:
        v = an + x / (1.0 - x)
        d = v + e0n
        g = d * d - e1n
        return v ** (inv_alpha - 1.0) * g ** (-inv_alpha) / (1.0 - x) ** 2

    val, err = quad(integrand, 0.0, 1.0, epsabs=_QUAD_TOL, epsrel=_QUAD_TOL, limit=200)
    scale = sigma ** (-inv_alpha)
    return scale * val, scale * err


def lower_bound(params: ModelParams, u: float) -> float:
    """Explosion-time lower bound; requires case A or B."""
    spec = bound_spec(params, u)
    alpha = params.alpha
    integral, _ = _tail_integral(params, u, spec.a_lower)
    return math.gamma(1.0 + alpha) ** (1.0 / alpha) * growth_factor(alpha) * integral


def upper_bound(params: ModelParams, u: float) -> float:
    """Explosion-time upper bound; requires case A or B.

    In case B the piece of the integral over [0, -e0), where Ghat is the
    constant -e1, is elementary: alpha * (-e0)^(1/alpha) * (-e1)^(-1/alpha).
    """
    spec = bound_spec(params, u)
    alpha = params.alpha
    integral, _ = _tail_integral(params, u, spec.a_lower)
    if spec.ghat_floor is not None:
        integral += (
            alpha * spec.a_lower ** (1.0 / alpha) * spec.ghat_floor ** (-1.0 / alpha)
        )
    return 4.0 * math.gamma(1.0 + alpha) ** (1.0 / alpha) * integral


def sandwich(params: ModelParams, u: float) -> tuple[float, float]:
    """Both bounds as (lower, upper); raises if they cross."""
    lo = lower_bound(params, u)
    hi = upper_bound(params, u)
    if lo > hi:
        raise BoundsConsistencyError(
            f"lower bound {lo} exceeds upper bound {hi} at u={u}"
        )
    return lo, hi
