"""Model parameters, Riccati coefficients and moment-case classification.

The rough Heston model (El Euch & Rosenbaum) is parametrised by a smoothness
exponent alpha in (1/2, 1], a spot/vol correlation rho, a mean-reversion speed
lambda, a vol-of-vol xi and variance levels vbar (long run) and v0 (initial).
The moment generating function E[S_t^u] is controlled by the quadratic

    R(u, w) = c1(u) + c2(u) w + c3 w^2,

whose root structure splits the real moments u into four cases (A to D).
Cases A and B are exactly the moments whose explosion time is finite; every
downstream computation in this package is routed through this classification.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass


class CaseError(ValueError):
    """An operation was called for a moment u outside its admissible cases."""


class MomentCase(enum.Enum):
    """Moment classification by the signs of c1, e0 and e1.

    A and B have a finite explosion time; C and D never explode.
    """

    A = "A"
    B = "B"
    C = "C"
    D = "D"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


_PARAM_KEYS = ("alpha", "rho", "lambda", "xi", "vbar", "v0")


@dataclass(frozen=True)
class ModelParams:
    """Rough Heston parameter set.

    alpha : smoothness exponent, 1/2 < alpha <= 1 (alpha = 1 is classical Heston)
    rho   : correlation, -1 < rho < 1
    lam   : mean-reversion speed, > 0 (JSON key "lambda")
    xi    : vol-of-vol, > 0
    vbar  : long-run variance, > 0
    v0    : initial variance, > 0

    vbar and v0 only enter the mgf itself; explosion times, bounds and
    critical moments depend on (alpha, rho, lam, xi) alone.
    """

    alpha: float
    rho: float
    lam: float
    xi: float
    vbar: float
    v0: float

    def __post_init__(self):
        if not 0.5 < self.alpha <= 1.0:
            raise ValueError(f"alpha={self.alpha} must be in (1/2, 1]")
        if not -1.0 < self.rho < 1.0:
            raise ValueError(f"rho={self.rho} must be in (-1, 1)")
        for name in ("lam", "xi", "vbar", "v0"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name}={getattr(self, name)} must be positive")

    @classmethod
    def from_dict(cls, data: dict) -> "ModelParams":
        """Build from a JSON-style dict with keys alpha/rho/lambda/xi/vbar/v0.

        Unknown keys are rejected so that typos do not silently fall back to
        defaults.
        """
        unknown = set(data) - set(_PARAM_KEYS)
        if unknown:
            raise ValueError(f"unknown parameter keys: {sorted(unknown)}")
        missing = set(_PARAM_KEYS) - set(data)
        if missing:
            raise ValueError(f"missing parameter keys: {sorted(missing)}")
        return cls(
            alpha=float(data["alpha"]),
            rho=float(data["rho"]),
            lam=float(data["lambda"]),
            xi=float(data["xi"]),
            vbar=float(data["vbar"]),
            v0=float(data["v0"]),
        )

    @classmethod
    def from_json(cls, text: str) -> "ModelParams":
        obj = json.loads(text)
        if not isinstance(obj, dict):
            raise ValueError("parameter JSON must be an object")
        return cls.from_dict(obj)

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "rho": self.rho,
            "lambda": self.lam,
            "xi": self.xi,
            "vbar": self.vbar,
            "v0": self.v0,
        }


def default_params() -> ModelParams:
    """Reference parameter set (alpha=0.6, rho=-0.8, lam=2, xi=0.2).

    vbar and v0 are set to 0.04; they do not affect explosion times.
    """
    return ModelParams(alpha=0.6, rho=-0.8, lam=2.0, xi=0.2, vbar=0.04, v0=0.04)


@dataclass(frozen=True)
class RiccatiCoeffs:
    """Coefficients of R(u, w) = c1 + c2 w + c3 w^2 and derived quantities.

    e0 = c2/2 and e1 = e0^2 - c3*c1 locate the roots of R at
    (-e0 +/- sqrt(e1))/c3.  d1 = c1*c3 and d2 = c2 are the constant and
    linear coefficients of the rescaled equation solved by f = c3*psi.
    """

    c1: float
    c2: float
    c3: float
    e0: float
    e1: float
    d1: float
    d2: float


def riccati_coeffs(params: ModelParams, u: float) -> RiccatiCoeffs:
    """Evaluate the Riccati coefficients at moment u.  Total function."""
    c1 = 0.5 * u * (u - 1.0)
    c2 = params.rho * params.xi * u - params.lam
    c3 = 0.5 * params.xi * params.xi
    e0 = 0.5 * c2
    e1 = e0 * e0 - c3 * c1
    return RiccatiCoeffs(c1=c1, c2=c2, c3=c3, e0=e0, e1=e1, d1=c1 * c3, d2=c2)


def classify(params: ModelParams, u: float) -> MomentCase:
    """Classify moment u into case A, B, C or D.

    The four predicates partition the real line:

        A: c1 > 0 and e0 >= 0
        B: c1 > 0 and e0 < 0 and e1 < 0
        C: c1 > 0 and e0 < 0 and e1 >= 0
        D: c1 <= 0  (i.e. u in [0, 1])

    Comparisons are exact floating-point comparisons; the boundary values are
    sensitive to the last ulp of the inputs.
    """
    rc = riccati_coeffs(params, u)
    if rc.c1 <= 0.0:
        return MomentCase.D
    if rc.e0 >= 0.0:
        return MomentCase.A
    if rc.e1 < 0.0:
        return MomentCase.B
    return MomentCase.C


def case_a_boundary(params: ModelParams) -> float | None:
    """Endpoint lam/(rho*xi) of the case-A interval, or None for rho = 0.

    For rho < 0 this is the right endpoint of the case-A interval on the
    negative axis; for rho > 0 the left endpoint on the positive axis.
    Evaluated as (lam/rho)/xi, which rounds better at representable inputs.
    """
    if params.rho == 0.0:
        return None
    return params.lam / params.rho / params.xi


def vie_nonlinearity(params: ModelParams, u, w):
    """Quadratic nonlinearity (w + e0)^2 - e1 of the Volterra equation.

    Accepts real or complex w (and complex u); equals c3*R(u, w/c3).
    """
    rc = riccati_coeffs(params, u)
    d = w + rc.e0
    return d * d - rc.e1
