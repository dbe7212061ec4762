"""Fractional power-series engine for the moment explosion time.

The solution f(u, t) = c3*psi(u, t) of the fractional Riccati equation admits
the expansion f(u, t) = sum_n a_n(u) t^(alpha n), where the coefficients obey
the convolution recurrence

    a_1 = d1 / v_1,
    a_(n+1) = (d2 * a_n + sum_{k=1}^{n-1} a_k a_(n-k)) / v_(n+1),

with v_n = Gamma(alpha n + 1) / Gamma(alpha n - alpha + 1).  In case A all
coefficients are positive and the explosion time equals the radius of
convergence of the series in z = t^alpha, raised to 1/alpha.  The estimators
below read the explosion time off the coefficient growth; in case B the same
quantity is only a lower bound.

The coefficients grow geometrically like R^-n, which overflows doubles for
small radii, so the recurrence runs on rescaled coefficients a_n * s^n and
re-chooses s whenever the scaled values leave the normal floating range.
Rescaling commutes with the recurrence exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from . import bounds
from .model import CaseError, ModelParams, MomentCase, classify, riccati_coeffs

_RESCALE_HI = 1e100
_RESCALE_LO = 1e-100


def gamma_ratio(alpha: float, n):
    """Ratio Gamma(alpha*n + 1) / Gamma(alpha*n - alpha + 1).

    Computed from log-gamma differences to avoid overflow; increasing in n
    and asymptotically (alpha*n)^alpha.  n may be a scalar or an array.
    """
    if not 0.5 < alpha <= 1.0:
        raise ValueError(f"alpha={alpha} must be in (1/2, 1]")
    an = alpha * np.asarray(n, dtype=float)
    if np.any(an < alpha):
        raise ValueError("n must be >= 1")
    out = np.exp(gammaln(an + 1.0) - gammaln(an - alpha + 1.0))
    return float(out) if np.isscalar(n) else out


@dataclass(frozen=True)
class SeriesState:
    """Coefficients a_1..a_n_max in rescaled form coeffs[n-1] = a_n * scale^n."""

    coeffs: np.ndarray
    scale: float
    n_max: int
    u: float
    alpha: float

    def log_abs(self) -> np.ndarray:
        """log|a_n| for n = 1..n_max; -inf where a_n = 0."""
        n = np.arange(1, self.n_max + 1)
        with np.errstate(divide="ignore"):
            return np.log(np.abs(self.coeffs)) - n * math.log(self.scale)

    def signs(self) -> np.ndarray:
        return np.sign(self.coeffs).astype(int)

    def coefficient(self, n: int) -> float:
        """Unscaled a_n; overflows to +/-inf when |a_n| exceeds double range."""
        if not 1 <= n <= self.n_max:
            raise IndexError(f"n={n} outside 1..{self.n_max}")
        c = self.coeffs[n - 1]
        if c == 0.0:
            return 0.0
        return math.copysign(math.exp(self.log_abs()[n - 1]), c)

    def to_csv(self, path) -> None:
        """Write rows (n, log|a_n|, sign) for external analysis."""
        log_abs = self.log_abs()
        signs = self.signs()
        with open(path, "w") as fh:
            fh.write("n,log_abs_coeff,sign\n")
            for i in range(self.n_max):
                fh.write(f"{i + 1},{float(log_abs[i])!r},{int(signs[i])}\n")


def series_coefficients(
    params: ModelParams, u: float, n_max: int, initial_scale: float | None = None
) -> SeriesState:
    """Run the coefficient recurrence up to order n_max, rescaling on the fly.

    initial_scale overrides the automatic choice (the implied radius of the
    explicit explosion-time lower bound in cases A and B, 1.0 otherwise);
    results are scale-invariant up to rounding.
    """
    if n_max < 1:
        raise ValueError(f"n_max={n_max} must be >= 1")
    rc = riccati_coeffs(params, u)
    alpha = params.alpha
    if initial_scale is None:
        if rc.d1 != 0.0 and classify(params, u) in (MomentCase.A, MomentCase.B):
            scale = bounds.lower_bound(params, u) ** alpha
        else:
            scale = 1.0
    else:
        if not initial_scale > 0.0:
            raise ValueError("initial_scale must be positive")
        scale = initial_scale

    v = gamma_ratio(alpha, np.arange(1, n_max + 1))
    coeffs = np.zeros(n_max)
    coeffs[0] = rc.d1 / v[0] * scale
    for i in range(1, n_max):
        # coeffs[i] is the scaled a_(i+1); the convolution term picks up one
        # extra factor of scale on top of the scaled products
        conv = np.dot(coeffs[: i - 1], coeffs[i - 2 :: -1]) if i >= 2 else 0.0
        coeffs[i] = scale * (rc.d2 * coeffs[i - 1] + conv) / v[i]
        mag = abs(coeffs[i])
        if mag != 0.0 and not _RESCALE_LO < mag < _RESCALE_HI:
            if not math.isfinite(mag):
                raise OverflowError(
                    f"coefficient recurrence overflowed at n={i + 1} for u={u}"
                )
            # renormalize so that |scaled a_(i+1)| = 1
            factor = mag ** (-1.0 / (i + 1))
            coeffs[: i + 1] *= factor ** np.arange(1, i + 2)
            scale *= factor
    return SeriesState(coeffs=coeffs, scale=scale, n_max=n_max, u=u, alpha=alpha)


@dataclass(frozen=True)
class ConvergenceDiagnostics:
    """Last two successive estimates of a quantity and their relative gap."""

    previous: float
    final: float
    rel_gap: float


@dataclass(frozen=True)
class ExplosionResult:
    """An explosion-time value or bound with its provenance and diagnostics."""

    value: float
    method: str
    case: MomentCase
    diagnostics: ConvergenceDiagnostics | None = None

    def __post_init__(self):
        if not (self.value >= 0.0 or math.isnan(self.value)):
            raise ValueError(f"explosion time {self.value} must be >= 0")


def _log_profile_const(alpha: float) -> float:
    """log of Gamma(alpha)^2 / (alpha^alpha * Gamma(2 alpha))."""
    return 2.0 * gammaln(alpha) - alpha * math.log(alpha) - gammaln(2.0 * alpha)


def raw_time_estimate(state: SeriesState, n: int) -> float:
    """Plain coefficient-growth estimate |a_n|^(-1/(alpha n))."""
    log_an = state.log_abs()[n - 1]
    if log_an == -math.inf:
        raise ValueError(f"a_{n} = 0; raw estimate undefined")
    return math.exp(-log_an / (state.alpha * n))


def refined_time_estimate(state: SeriesState, n: int) -> float:
    """Growth estimate corrected by the subexponential coefficient profile.

    Evaluates (a_n * n^(1-alpha) * Gamma(alpha)^2/(alpha^alpha Gamma(2 alpha)))
    to the power -1/(alpha (n+1)), in log space.  Converges to the same limit
    as the raw estimate but with a much smaller relative error.
    """
    alpha = state.alpha
    log_an = state.log_abs()[n - 1]
    if log_an == -math.inf:
        raise ValueError(f"a_{n} = 0; refined estimate undefined")
    log_val = log_an + (1.0 - alpha) * math.log(n) + _log_profile_const(alpha)
    return math.exp(-log_val / (alpha * (n + 1)))


def explosion_time(params: ModelParams, u: float, n_max: int = 100) -> ExplosionResult:
    """Explosion time for a case-A moment from the coefficient asymptotics.

    Requires classify(params, u) == A, where all coefficients are positive
    and the series radius equals the explosion time.  The diagnostics carry
    the half-order estimate so callers can see the convergence.
    """
    case = classify(params, u)
    if case is not MomentCase.A:
        raise CaseError(f"series explosion time requires case A, got {case} at u={u}")
    state = series_coefficients(params, u, n_max)
    est_half = refined_time_estimate(state, max(1, n_max // 2))
    est = refined_time_estimate(state, n_max)
    gap = abs(est - est_half) / est
    return ExplosionResult(
        value=est,
        method="series",
        case=case,
        diagnostics=ConvergenceDiagnostics(previous=est_half, final=est, rel_gap=gap),
    )


def explosion_lower_bound(
    params: ModelParams, u: float, n_max: int = 200
) -> ExplosionResult:
    """Lower bound |a_n|^(-1/(alpha n)) for the explosion time in case B.

    The coefficients are no longer all positive, so the radius of the series
    only bounds the explosion time from below; the result is flagged as a
    bound, not a value.  If a_n_max happens to vanish, the largest order with
    a nonzero coefficient is used instead.
    """
    case = classify(params, u)
    if case is not MomentCase.B:
        raise CaseError(f"series lower bound requires case B, got {case} at u={u}")
    state = series_coefficients(params, u, n_max)
    n = n_max
    while n > 1 and state.coeffs[n - 1] == 0.0:
        n -= 1
    est = raw_time_estimate(state, n)
    est_half = raw_time_estimate(state, max(1, n // 2))
    gap = abs(est - est_half) / est
    return ExplosionResult(
        value=est,
        method="series_lower_bound",
        case=case,
        diagnostics=ConvergenceDiagnostics(previous=est_half, final=est, rel_gap=gap),
    )


def polylog(nu: float, z: float, rel_tol: float = 1e-14) -> float:
    """Polylogarithm Li_nu(z) = sum_{n>=1} z^n / n^nu for 0 <= z < 1, nu >= 0.

    Direct summation; the truncation error is controlled through the
    geometric tail bound term * z / (1 - z), valid for nu >= 0.
    """
    if not 0.0 <= z < 1.0:
        raise ValueError(f"z={z} must be in [0, 1)")
    if nu < 0.0:
        raise ValueError(f"nu={nu} must be >= 0")
    if z == 0.0:
        return 0.0
    total = 0.0
    zn = 1.0
    tail_factor = z / (1.0 - z)
    for n in range(1, 50_000_000):
        zn *= z
        term = zn / n**nu
        total += term
        if term * tail_factor <= rel_tol * total:
            return total
    raise RuntimeError(f"polylog({nu}, {z}) did not converge")


def approx_solution(
    params: ModelParams,
    u: float,
    t: float,
    n_corrections: int = 10,
    n_max: int = 100,
) -> float:
    """Riccati solution f(u, t) via its polylogarithm blow-up profile.

    Replaces the series coefficients beyond order n_corrections by their
    asymptotic profile b_n = R^(-n-1) n^(alpha-1) alpha^alpha
    Gamma(2 alpha)/Gamma(alpha)^2, which sums to a polylogarithm:

        f(u, t) ~ const / T*^alpha * Li_(1-alpha)((t/T*)^alpha)
                  + sum_{n<=N} (a_n - b_n) t^(alpha n).

    Only valid for case-A moments and 0 <= t below the explosion time.
    """
    alpha = params.alpha
    tstar = explosion_time(params, u, n_max=n_max).value
    if not 0.0 <= t < tstar:
        raise ValueError(f"t={t} must be in [0, {tstar}) for u={u}")
    if t == 0.0:
        return 0.0
    radius = tstar**alpha
    profile_const = math.exp(-_log_profile_const(alpha))
    lead = profile_const / radius * polylog(1.0 - alpha, (t / tstar) ** alpha)
    state = series_coefficients(params, u, n_corrections)
    corr = 0.0
    for n in range(1, n_corrections + 1):
        a_n = state.coefficient(n)
        b_n = profile_const * n ** (alpha - 1.0) / radius ** (n + 1)
        corr += (a_n - b_n) * t ** (alpha * n)
    return lead + corr
