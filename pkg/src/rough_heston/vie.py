"""Numerical solver for the weakly singular Volterra integral equation.

The rescaled Riccati solution f(u, t) = c3 * psi(u, t) satisfies

    f(u, t) = (1/Gamma(alpha)) * integral_0^t (t - s)^(alpha-1) G(u, f(u, s)) ds

with the quadratic nonlinearity G(u, w) = (w + e0)^2 - e1.  This module
integrates it on uniform grids with the fractional Adams predictor-corrector
of Diethelm, Ford & Freed (product rectangle predictor, product trapezoidal
corrector), for real or complex u.  It serves as the independent oracle for
the power-series explosion-time estimates: the blow-up time of f equals the
moment explosion time, and the mgf is recovered from fractional integrals of
psi = f/c3,

    E[e^(u X_t)] = exp(vbar * lam * I^1 psi + v0 * I^(1-alpha) psi).

Blow-up handling.  A fixed-point corrector resolves the solution only while
|f + e0| stays below a stability ceiling of order Gamma(alpha+2)/h^alpha
(beyond it the iteration map stops being a contraction), which corresponds
to t within a step or two of the blow-up time.  The solver therefore stops
at the ceiling and extrapolates the blow-up time from the last two grid
values through the asymptotic profile f ~ C (T - t)^(-alpha); the two-point
form of the extrapolation cancels the profile constant.  The stop counts as
a *detected* blow-up only when the ceiling clears the turning region of G
(scale |e0| + sqrt|e1|), i.e. when f is certainly in the terminal runaway;
otherwise the step size is too coarse for this moment and the public solver
raises CorrectorError.

Near the boundary of the explosive region the solution crawls through a long
flat "trough" of G (minimum -e1 close to zero) and then escapes abruptly, so
no single uniform grid can both span the trough and resolve the escape.  The
blow-up oracle handles this with restart segments: the history enters later
segments through exact product-trapezoidal evaluation of the memory integral,
coarse segments march through the trough, and once the solution leaves the
resolvable range a new segment zooms onto the escape, its window sized by an
explicit remaining-time bound of the same form as the global explosion-time
upper bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from . import bounds
from .model import ModelParams, MomentCase, classify, riccati_coeffs

_MIN_STEPS = 16


class CorrectorError(RuntimeError):
    """Corrector iterations failed to converge: step size too coarse."""


class ExplosionError(RuntimeError):
    """The mgf was requested at or beyond the explosion time."""


@dataclass(frozen=True)
class VieSolution:
    """Solution values on a uniform grid, truncated at blow-up detection.

    grid        : time points 0 = t_0 < ... < t_M (uniform spacing)
    values      : f(u, t_m), real or complex, aligned with grid
    blew_up     : True when the solver stopped at the blow-up threshold
    blowup_time : extrapolated blow-up time (present iff blew_up)
    u           : the moment exponent
    """

    grid: np.ndarray
    values: np.ndarray
    blew_up: bool
    blowup_time: float | None
    u: complex | float

    def to_csv(self, path) -> None:
        """Write rows (t, Re f, Im f)."""
        with open(path, "w") as fh:
            fh.write("t,re_f,im_f\n")
            for t, v in zip(self.grid, self.values):
                fh.write(f"{float(t)!r},{float(v.real)!r},{float(v.imag)!r}\n")


@dataclass(frozen=True)
class _Segment:
    """Computed nonlinearity values G(f) on one uniform grid piece."""

    t0: float
    h: float
    gvals: np.ndarray  # at t0 + k*h, k = 0..len-1; covers [t0, t0 + (len-1)*h]


def _history_integral(alpha: float, segments: list[_Segment], t: float):
    """(1/Gamma(alpha)) integral over past segments of (t-s)^(alpha-1) G(f(s)).

    G(f) is interpolated piecewise linearly on each segment and the kernel
    integrated exactly, so the memory term of a restarted equation carries no
    extra discretization order.  Requires t at or beyond every segment end.
    """
    total = 0.0
    for seg in segments:
        n = len(seg.gvals) - 1
        if n < 1:
            continue
        # distances to interval endpoints; clamp tiny negatives from the
        # rounding of segment joints
        ta = np.maximum(t - (seg.t0 + seg.h * np.arange(n)), 0.0)
        tb = np.maximum(ta - seg.h, 0.0)
        pa = ta**alpha
        pb = tb**alpha
        phi0 = (pa - pb) / alpha
        phi1 = ta * phi0 - (ta * pa - tb * pb) / (alpha + 1.0)
        y0 = seg.gvals[:-1]
        y1 = seg.gvals[1:]
        total = total + np.sum(y0 * phi0 + (y1 - y0) * (phi1 / seg.h))
    return total / math.gamma(alpha)


def _blowup_extrapolation(alpha: float, t_m: float, h: float, fm, fprev) -> float:
    """Blow-up time from the profile f ~ C (T - t)^(-alpha) at time t_m.

    With two growing values the ratio eliminates C; if the previous value is
    unusable, fall back to the one-point form with C = Gamma(2 alpha)/Gamma(alpha),
    and to one step past t_m when even fm is degenerate.
    """
    fm = abs(fm)
    if not 0.0 < fm < math.inf:
        return float(t_m + h)
    if fprev is not None:
        fprev = abs(fprev)
        if 0.0 < fprev < fm:
            beta = (fprev / fm) ** (-1.0 / alpha)
            return float(t_m + h / (beta - 1.0))
    profile_const = math.exp(gammaln(2.0 * alpha) - gammaln(alpha))
    return float(t_m + (profile_const / fm) ** (1.0 / alpha))


def _adams_segment(
    params: ModelParams,
    u,
    t0: float,
    h: float,
    steps: int,
    segments: list[_Segment],
    scheme: str,
    blowup_threshold: float,
    corrector_tol: float,
    max_corrector_iters: int,
):
    """Run one uniform-grid segment of the (possibly restarted) equation.

    Returns (status, f, gv, m, estimate) where f and gv hold the local values
    up to index m inclusive and status is one of

        "ok"      : segment completed
        "blowup"  : trusted blow-up detection, estimate is the blow-up time
        "ceiling" : |f + e0| left the resolvable range at step m + 1 without
                    a trustworthy detection (step size too coarse)
    """
    alpha = params.alpha
    is_complex = np.iscomplexobj(u)
    rc = riccati_coeffs(params, complex(u) if is_complex else float(u))
    e0, e1 = rc.e0, rc.e1

    h_alpha = h**alpha
    c_pred = h_alpha / math.gamma(alpha + 1.0)
    c_corr = h_alpha / math.gamma(alpha + 2.0)

    blowup_possible = classify(params, float(np.real(u))) in (
        MomentCase.A,
        MomentCase.B,
    )
    escape_scale = abs(e0) + math.sqrt(abs(e1))
    d_stop = min(0.125 / c_corr, blowup_threshold)
    detection_trusted = blowup_possible and d_stop >= 4.0 * escape_scale + abs(e0) + 1.0

    lags = np.arange(steps + 1, dtype=float)
    pow_a = lags**alpha
    pow_a1 = lags ** (alpha + 1.0)
    pred_w = np.diff(pow_a)
    corr_w = np.diff(pow_a1, 2)

    dtype = np.complex128 if is_complex else np.float64
    f = np.zeros(steps + 1, dtype=dtype)
    gv = np.empty(steps + 1, dtype=dtype)

    def g_of(w):
        d = w + e0
        return d * d - e1

    f[0] = _history_integral(alpha, segments, t0) if segments else 0.0
    gv[0] = g_of(f[0])

    for m in range(1, steps + 1):
        t_m = t0 + m * h
        forcing = _history_integral(alpha, segments, t_m) if segments else 0.0
        x = forcing + c_pred * np.dot(gv[:m], pred_w[:m][::-1])
        if scheme == "adams":
            a0 = pow_a1[m - 1] - (m - 1.0 - alpha) * pow_a[m]
            hist = a0 * gv[0]
            if m >= 2:
                hist = hist + np.dot(gv[1:m], corr_w[: m - 1][::-1])
            converged = False
            for _ in range(max_corrector_iters):
                x_new = forcing + c_corr * (g_of(x) + hist)
                if abs(x_new) > blowup_threshold:
                    x = x_new
                    break
                if abs(x_new - x) <= corrector_tol * (1.0 + abs(x_new)):
                    x = x_new
                    converged = True
                    break
                x = x_new
            if not converged:
                # the iteration map lost contractivity within this step; in
                # the trusted regime that is the runaway escaping, anywhere
                # else the step size is too coarse
                if detection_trusted and abs(x + e0) > d_stop:
                    est = _blowup_extrapolation(
                        alpha, t_m - h, h, f[m - 1], f[m - 2] if m >= 2 else None
                    )
                    return "blowup", f[:m], gv[:m], m - 1, est
                return "ceiling", f[:m], gv[:m], m - 1, None
        f[m] = x
        gv[m] = g_of(x)
        # a converged value is accepted regardless of magnitude; the ceiling
        # only decides when a trusted runaway detection stops the solve (the
        # rectangle mode has no convergence arbiter, so it stops either way)
        if abs(x + e0) > d_stop:
            if detection_trusted:
                est = _blowup_extrapolation(alpha, t_m, h, f[m], f[m - 1])
                return "blowup", f[: m + 1], gv[: m + 1], m, est
            if scheme == "rectangle" or abs(x) > blowup_threshold:
                return "ceiling", f[:m], gv[:m], m - 1, None

    return "ok", f, gv, steps, None


def solve_vie(
    params: ModelParams,
    u,
    t_end: float,
    steps: int,
    scheme: str = "adams",
    blowup_threshold: float = 1e8,
    corrector_tol: float = 1e-12,
    max_corrector_iters: int = 20,
) -> VieSolution:
    """Integrate the Volterra equation for f(u, .) on [0, t_end].

    u may be real or complex.  scheme is "adams" (predictor-corrector,
    default) or "rectangle" (explicit product rectangle rule, kept as a
    cross-check).  The solver stops early and flags blow-up once the solution
    exceeds the resolvable threshold in a regime where the detection is
    trustworthy; leaving the resolvable range anywhere else raises
    CorrectorError and means the step size is too coarse.
    """
    if not t_end > 0.0:
        raise ValueError(f"t_end={t_end} must be positive")
    if steps < _MIN_STEPS:
        raise ValueError(f"steps={steps} must be >= {_MIN_STEPS}")
    if scheme not in ("adams", "rectangle"):
        raise ValueError(f"unknown scheme {scheme!r}")

    h = t_end / steps
    status, f, gv, m, est = _adams_segment(
        params, u, 0.0, h, steps, [], scheme,
        blowup_threshold, corrector_tol, max_corrector_iters,
    )
    is_complex = np.iscomplexobj(u)
    grid = np.linspace(0.0, t_end, steps + 1)[: m + 1]
    if status == "ceiling":
        raise CorrectorError(
            f"solution left the range resolvable at step size {h:.3g} near "
            f"t={grid[-1] + h:.6g}; refine the grid"
        )
    return VieSolution(
        grid=grid,
        values=f,
        blew_up=status == "blowup",
        blowup_time=est,
        u=complex(u) if is_complex else float(u),
    )


def _remaining_time_bound(params: ModelParams, u: float, level: float) -> float:
    """Upper bound for the time left until blow-up once f has reached `level`.

    Same comparison argument as the global explosion-time upper bound, with
    the level sequence started at `level` instead of 0:

        remaining <= 4 Gamma(1+alpha)^(1/alpha)
                     * integral_level^inf (w/Ghat)^(1/alpha) dw/w.
    """
    alpha = params.alpha
    rc = riccati_coeffs(params, u)
    spec = bounds.bound_spec(params, u)
    level = max(level, 0.0)
    integral = 0.0
    if spec.ghat_floor is not None and level < spec.a_lower:
        # constant floor piece of Ghat on [level, -e0)
        integral += (
            alpha
            * (spec.a_lower ** (1.0 / alpha) - level ** (1.0 / alpha))
            * spec.ghat_floor ** (-1.0 / alpha)
        )
        level = spec.a_lower
    integral += bounds._tail_integral(params, u, level)[0]
    return 4.0 * math.gamma(1.0 + alpha) ** (1.0 / alpha) * integral


def _multiphase_blowup_time(
    params: ModelParams,
    u: float,
    lb: float,
    cap: float,
    steps: int,
    blowup_threshold: float,
    horizon0: float | None = None,
) -> float:
    """Blow-up time of f(u, .) for a case-A/B moment, by segment marching.

    Each segment runs `steps` fractional Adams steps.  Completed segments
    extend the history and the horizon grows geometrically (capped just above
    the explosion-time upper bound); when the solution leaves the resolvable
    range without a trusted detection, the segment is truncated a few points
    earlier and the next segment zooms onto the escape with a window sized by
    the remaining-time bound.
    """
    segments: list[_Segment] = []
    t_cur = 0.0
    horizon = min(horizon0 if horizon0 is not None else 1.25 * lb, cap)
    for _ in range(120):
        window = horizon - t_cur
        h = window / steps
        status, f, gv, m, est = _adams_segment(
            params, u, t_cur, h, steps, segments, "adams",
            blowup_threshold, 1e-12, 20,
        )
        if status == "blowup":
            return est
        if status == "ok":
            segments.append(_Segment(t_cur, h, gv))
            t_cur = horizon
            if horizon >= 0.999 * cap:
                # no escape below the upper bound: the grid must be too
                # coarse to follow the solution into the runaway
                raise CorrectorError(
                    f"no blow-up detected below the upper bound at u={u} "
                    f"with {steps}-step segments"
                )
            horizon = min(1.6 * horizon, cap)
            continue
        # ceiling: zoom onto the escape
        r = max(m - 4, 0)
        if r >= 1:
            segments.append(_Segment(t_cur, h, gv[: r + 1]))
            t_cur += r * h
            level = float(np.real(f[r]))
        else:
            level = float(np.real(f[0])) if len(f) else 0.0
        rem = _remaining_time_bound(params, u, level)
        # shrink strictly so the resolution improves even if the bound is slack
        horizon = t_cur + min(1.05 * rem, 0.75 * window)
    raise RuntimeError(f"blow-up search did not terminate at u={u}")


def blowup_time_oracle(
    params: ModelParams,
    u: float,
    rel_tol: float = 5e-3,
    initial_steps: int = 1024,
    max_steps: int = 1 << 15,
) -> float:
    """Moment explosion time by direct blow-up detection; inf in cases C/D.

    Cases C and D never blow up and return inf immediately.  Otherwise the
    equation is integrated with windows expanded geometrically from the
    explicit lower bound and capped just above the explicit upper bound
    (which guarantees the blow-up lies inside), and the segment resolution is
    doubled until two consecutive refinements agree to rel_tol.  rel_tol = 0
    forces refinement all the way to max_steps and returns the finest
    estimate.
    """
    if classify(params, u) in (MomentCase.C, MomentCase.D):
        return math.inf
    lb, ub = bounds.sandwich(params, u)
    cap = 1.05 * ub
    steps = max(_MIN_STEPS, min(initial_steps, max_steps))
    est = None
    while True:
        seed = 1.2 * est if est is not None else None
        try:
            new = _multiphase_blowup_time(params, u, lb, cap, steps, 1e8, seed)
        except CorrectorError:
            new = None
        if new is not None:
            prev, est = est, new
            if prev is not None and abs(est - prev) <= rel_tol * abs(est):
                return est
        if steps >= max_steps:
            if est is None:
                raise RuntimeError(
                    f"blow-up not detected below the explicit upper bound at u={u}"
                )
            return est
        steps = min(2 * steps, max_steps)


def _frac_integral_endpoint(beta: float, h: float, vals: np.ndarray):
    """Riemann-Liouville integral I^beta of grid values at the final point.

    Product-trapezoidal weights (the values are interpolated piecewise
    linearly and the kernel integrated exactly); beta = 1 reduces to the
    classical trapezoid rule and beta = 0 to the identity.
    """
    m = len(vals) - 1
    if m < 1:
        return 0.0 * vals[0]
    lags = np.arange(m + 1, dtype=float)
    pow_b1 = lags ** (beta + 1.0)
    w = np.empty(m + 1)
    w[0] = pow_b1[m - 1] - (m - 1.0 - beta) * m**beta
    w[m] = 1.0
    if m >= 2:
        lag = lags[1:m]
        w[1:m] = ((lag + 1.0) ** (beta + 1.0) + (lag - 1.0) ** (beta + 1.0)
                  - 2.0 * pow_b1[1:m])[::-1]
    return h**beta / math.gamma(beta + 2.0) * np.dot(w, vals)


def mgf(params: ModelParams, u, t: float, steps: int = 1024):
    """Moment generating function E[e^(u X_t)] for real or complex u.

    Evaluates exp(vbar*lam*I^1 psi + v0*I^(1-alpha) psi) with psi the Riccati
    solution on a fresh grid over [0, t].  Raises ExplosionError when the
    solution blows up at or before t, which happens exactly when t reaches
    the explosion time of Re(u).  Returns a float for real u, complex
    otherwise.
    """
    if t < 0.0:
        raise ValueError(f"t={t} must be >= 0")
    is_complex = np.iscomplexobj(u)
    if t == 0.0:
        return 1.0 + 0.0j if is_complex else 1.0
    sol = solve_vie(params, u, t, steps)
    if sol.blew_up:
        raise ExplosionError(
            f"mgf requested at t={t} but the solution blows up near "
            f"t={sol.blowup_time:.6g} (explosion time of Re(u))"
        )
    if is_complex and float(np.real(u)) != 0.0:
        # the complex solution can outlive the mgf's strip of validity, which
        # ends at the explosion time of the real part
        real_sol = solve_vie(params, float(np.real(u)), t, steps)
        if real_sol.blew_up:
            raise ExplosionError(
                f"mgf requested at t={t} beyond the explosion time "
                f"~{real_sol.blowup_time:.6g} of Re(u)={np.real(u)}"
            )
    c3 = riccati_coeffs(params, 0.0).c3
    psi = sol.values / c3
    h = sol.grid[1] - sol.grid[0]
    exponent = (
        params.vbar * params.lam * _frac_integral_endpoint(1.0, h, psi)
        + params.v0 * _frac_integral_endpoint(1.0 - params.alpha, h, psi)
    )
    value = np.exp(exponent)
    return complex(value) if is_complex else float(value.real)


def mgf_on_grid(params: ModelParams, sol: VieSolution) -> np.ndarray:
    """mgf values at every grid point of an existing solution.

    The fractional integrals are re-evaluated per grid point, so the cost is
    quadratic in the grid size; intended for exporting solution paths.
    """
    c3 = riccati_coeffs(params, 0.0).c3
    psi = sol.values / c3
    h = float(sol.grid[1] - sol.grid[0]) if len(sol.grid) > 1 else 0.0
    out = np.empty(len(sol.grid), dtype=complex)
    for m in range(len(sol.grid)):
        exponent = (
            params.vbar * params.lam * _frac_integral_endpoint(1.0, h, psi[: m + 1])
            + params.v0 * _frac_integral_endpoint(1.0 - params.alpha, h, psi[: m + 1])
        )
        out[m] = np.exp(exponent)
    return out
