"""Critical moments, Lee wing slope and density tail exponents.

The critical moments u-(T) < 0 and u+(T) > 1 are the endpoints of the
interval of exponents u with E[S_T^u] finite.  They are computed by
inverting the explosion time: u-(T) solves T*(u) = T on the negative axis.
The power-series explosion-time estimate applies only in case A, which for
rho < 0 is the interval u <= lam/(rho*xi); maturities are therefore limited
to T at or below the explosion time at that boundary (small and medium
maturities in practice).  The mirrored computation of u+(T) needs rho > 0.

The left wing of the implied-volatility smile follows from Lee's moment
formula,

    T * limsup_{k -> -inf} sigma(k)^2 / |k| = 2 - 4 (sqrt(u-^2 - u-) + u-),

and the density of S_T has power-law tails with exponents -u-(T) - 1 at zero
and -u+(T) - 1 at infinity.

Strict monotonicity of the explosion time in u is verified empirically on
each bracket; if it ever fails, the inversion falls back to a rightmost-root
scan so that the sup/inf characterization of the critical moments is
respected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from scipy.optimize import brentq

from . import classical, series
from .model import CaseError, ModelParams, MomentCase, case_a_boundary, classify

_U_TOL = 1e-8
_BRENT_RTOL = 8.9e-16


class CorrelationSignError(ValueError):
    """The requested side needs the opposite sign of the correlation."""


class MaturityRangeError(ValueError):
    """Maturity outside the case-A invertible range; carries the boundary."""

    def __init__(self, T: float, boundary_time: float, side: str):
        self.T = T
        self.boundary_time = boundary_time
        self.side = side
        super().__init__(
            f"T={T} outside the valid range (0, {boundary_time}] for the "
            f"{side} critical moment"
        )


@dataclass(frozen=True)
class CriticalMomentResult:
    """A critical moment with its inversion residual.

    u_critical : the root of T*(u) = T on the requested side
    side       : "lower" (u < 0) or "upper" (u > 1)
    T          : maturity
    method     : "series_inversion" (alpha < 1) or "classical" (alpha = 1)
    residual   : |T*(u_critical) - T|
    """

    u_critical: float
    side: str
    T: float
    method: str
    residual: float


def _nudge_into_case_a(params: ModelParams, u: float, direction: float) -> float:
    """Move u by ulps in the given direction until it classifies as case A.

    The case-A endpoint lam/(rho*xi) is sensitive to the last ulp; analytic
    membership is restored by at most a few floating-point increments.
    """
    target = math.inf if direction > 0 else -math.inf
    for _ in range(8):
        if classify(params, u) is MomentCase.A:
            return u
        u = math.nextafter(u, target)
    raise CaseError(f"could not locate the case-A endpoint near u={u}")


@lru_cache(maxsize=128)
def _case_a_entry(params: ModelParams, side: str, n_max: int) -> tuple[float, float]:
    """(entry moment of the invertible case-A region, explosion time there).

    The explosion time at the entry moment is the largest invertible
    maturity.  The series estimator converges slowly right at the case-A
    endpoint (the linear Riccati coefficient degenerates there), so the entry
    moment is moved into the interval until the estimator's own half-order
    diagnostic shows convergence; inverting closer to the endpoint would
    produce artifacts of the unconverged estimator.  For rho > 0 with
    lam/(rho*xi) <= 1, case A covers all of u > 1 and every maturity is
    invertible (the explosion time diverges as u drops to 1).  Cached per
    parameter set; the cache is the only shared state in this module and is
    safe for concurrent readers.
    """
    boundary = case_a_boundary(params)
    if boundary is None or (boundary > 0.0) != (side == "upper"):
        raise CorrelationSignError(
            f"case A lies on the other side of zero for rho={params.rho}; "
            f"the {side} critical moment is not computable"
        )
    direction = -1.0 if side == "lower" else 1.0
    if side == "upper" and boundary <= 1.0:
        return 1.0, math.inf
    u_entry = _nudge_into_case_a(params, boundary, direction)
    if params.alpha == 1.0:
        return u_entry, classical.explosion_time(params, u_entry)
    result = series.explosion_time(params, u_entry, n_max=n_max)
    inset = 1e-6 * max(abs(boundary), 1.0)
    while result.diagnostics.rel_gap > 0.02:
        u_entry = boundary + direction * inset
        result = series.explosion_time(params, u_entry, n_max=n_max)
        inset *= 4.0
        if inset > 0.5 * max(abs(boundary), 1.0):
            break
    return u_entry, result.value


def _explosion_time(params: ModelParams, u: float, n_max: int) -> float:
    if params.alpha == 1.0:
        return classical.explosion_time(params, u)
    return series.explosion_time(params, u, n_max=n_max).value


def maturity_boundary(params: ModelParams, side: str, n_max: int = 100) -> float:
    """Largest maturity for which the critical moment on this side is computable.

    At alpha = 1 the classical closed form inverts for every maturity.
    """
    if side not in ("lower", "upper"):
        raise ValueError(f"side must be 'lower' or 'upper', got {side!r}")
    if params.alpha == 1.0:
        return math.inf
    return _case_a_entry(params, side, n_max)[1]


def _rightmost_root(fn, inner: float, outer: float, levels: int = 3) -> float:
    """Root of fn closest to `inner`, by scanning a refining grid.

    Fallback for a non-monotone explosion time: implements the sup/inf
    characterization by taking the sign change nearest the case boundary.
    """
    lo, hi = inner, outer
    for _ in range(levels):
        n = 65
        step = (hi - lo) / (n - 1)
        prev_x, prev_f = lo, fn(lo)
        for i in range(1, n):
            x = lo + i * step
            fx = fn(x)
            if (prev_f >= 0.0) != (fx >= 0.0):
                lo, hi = prev_x, x
                break
            prev_x, prev_f = x, fx
        else:
            raise RuntimeError("no sign change found in the fallback scan")
    return brentq(fn, lo, hi, xtol=_U_TOL, rtol=_BRENT_RTOL)


def _invert_explosion_time(
    params: ModelParams, T: float, side: str, n_max: int
) -> CriticalMomentResult:
    if not T > 0.0:
        raise ValueError(f"T={T} must be positive")
    if params.alpha == 1.0:
        u = classical.critical_moment(params, T, side)
        residual = abs(classical.explosion_time(params, u) - T)
        return CriticalMomentResult(u, side, T, "classical", residual)

    u_entry, t_entry = _case_a_entry(params, side, n_max)
    if T > t_entry:
        raise MaturityRangeError(T, t_entry, side)

    def fn(u: float) -> float:
        return _explosion_time(params, u, n_max) - T

    sign = -1.0 if side == "lower" else 1.0
    if math.isinf(t_entry):
        # approach u = 1 from above until the explosion time exceeds T
        offset = max(abs(u_entry), 1.0)
        inner = u_entry + offset
        while fn(inner) < 0.0:
            offset *= 0.25
            inner = u_entry + offset
    else:
        inner = u_entry
    # expand outward, seeded by the small-T decay |u| ~ T^(-alpha)
    seed = max(2.0, 1.5 * (t_entry / T) ** params.alpha if not math.isinf(t_entry) else 2.0)
    outer = inner * seed if inner * sign > 0 else inner + sign * seed
    samples = [(inner, fn(inner))]
    while True:
        f_outer = fn(outer)
        samples.append((outer, f_outer))
        if f_outer < 0.0:
            break
        outer = inner + 2.0 * (outer - inner)

    # the explosion time should decrease strictly from inner to outer;
    # fall back to the rightmost-root scan if the samples disagree
    values = [fv for _, fv in samples]
    monotone = all(a >= b for a, b in zip(values, values[1:]))
    if monotone:
        lo, hi = (outer, inner) if side == "lower" else (inner, outer)
        u = brentq(fn, lo, hi, xtol=_U_TOL, rtol=_BRENT_RTOL)
    else:
        u = _rightmost_root(fn, inner, outer)
    residual = abs(fn(u))
    return CriticalMomentResult(u, side, T, "series_inversion", residual)


def lower_critical_moment(
    params: ModelParams, T: float, n_max: int = 100
) -> CriticalMomentResult:
    """u-(T): the root of T*(u) = T on u <= lam/(rho*xi); needs rho < 0.

    Raises MaturityRangeError (carrying the valid range) when T exceeds the
    explosion time at the case-A endpoint.
    """
    if not params.rho < 0.0:
        raise CorrelationSignError(
            f"lower critical moment requires rho < 0, got rho={params.rho}"
        )
    return _invert_explosion_time(params, T, "lower", n_max)


def upper_critical_moment(
    params: ModelParams, T: float, n_max: int = 100
) -> CriticalMomentResult:
    """u+(T): mirror of the lower critical moment; needs rho > 0."""
    if not params.rho > 0.0:
        raise CorrelationSignError(
            f"upper critical moment requires rho > 0, got rho={params.rho}"
        )
    return _invert_explosion_time(params, T, "upper", n_max)


def lee_left_wing_slope(params: ModelParams, T: float, n_max: int = 100) -> float:
    """Asymptotic left-wing slope of implied variance, sigma(k)^2/|k| as k -> -inf.

    Equals (2 - 4 (sqrt(u^2 - u) + u))/T at u = u-(T); the inner expression
    is evaluated in a form stable for large negative u.  The slope times T
    lies in (0, 2] for u <= 0.
    """
    u = lower_critical_moment(params, T, n_max=n_max).u_critical
    q = 0.0 if u == 0.0 else -u / (math.sqrt(u * u - u) - u)
    return (2.0 - 4.0 * q) / T


@dataclass(frozen=True)
class TailExponents:
    """Power-law exponents of the density of S_T at 0 and at infinity."""

    left: float
    right: float | None
    right_note: str | None = None


def tail_exponents(params: ModelParams, T: float, n_max: int = 100) -> TailExponents:
    """Density tail exponents: left = -u-(T) - 1 (x -> 0); right when rho > 0.

    The left exponent needs the lower critical moment and hence rho < 0; the
    right one would need rho > 0, so it is reported as None with a note.
    """
    res = lower_critical_moment(params, T, n_max=n_max)
    return TailExponents(
        left=-res.u_critical - 1.0,
        right=None,
        right_note="right tail exponent needs the upper critical moment, "
        "computable only for rho > 0",
    )
