"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines.  Every tolerance is fixed here; nothing is calibrated at run time.
"""

import math
import time

import numpy as np
import pytest

from rough_heston import bounds, case_a_boundary, classical, classify, critical, series, vie
from rough_heston.model import MomentCase, riccati_coeffs
from .conftest import fig1_with_alpha


def report(name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def test_criterion_01_dichotomy(fig1):
    """Explosion is finite exactly in cases A and B, over 400 moments."""
    start = time.time()
    grid = np.linspace(-60.0, 60.0, 400)
    mismatches = []
    for u in grid:
        u = float(u)
        explosive = classify(fig1, u) in (MomentCase.A, MomentCase.B)
        finite = math.isfinite(vie.blowup_time_oracle(fig1, u))
        if finite != explosive:
            mismatches.append(u)
    elapsed = time.time() - start
    report(
        "criterion 1 (finiteness dichotomy on 400-point grid)",
        not mismatches and elapsed < 300.0,
        f"mismatches={mismatches}, elapsed={elapsed:.1f}s (< 300s)",
    )


def test_criterion_02_case_a_interval(fig1):
    boundary = case_a_boundary(fig1)
    report(
        "criterion 2 (case-A endpoint)",
        boundary == -12.5,
        f"lam/(rho*xi) = {boundary!r}",
    )


def test_criterion_03_sandwich():
    worst = math.inf
    ok = True
    for alpha in (0.6, 0.75, 0.9):
        params = fig1_with_alpha(alpha)
        for u in np.linspace(-60.0, -13.0, 30):
            lo, hi = bounds.sandwich(params, float(u))
            mid = series.explosion_time(params, float(u)).value
            ok &= lo < mid < hi
            worst = min(worst, mid - lo, hi - mid)
    report(
        "criterion 3 (strict bound sandwich, 3 alphas x 30 moments)",
        ok,
        f"smallest strict margin {worst:.3e}",
    )


def test_criterion_04_classical_sharpness():
    params = fig1_with_alpha(1.0)
    worst = 0.0
    for u in np.linspace(-60.0, -13.0, 20):
        lo = bounds.lower_bound(params, float(u))
        ref = classical.explosion_time(params, float(u))
        worst = max(worst, abs(lo - ref) / ref)
    report(
        "criterion 4 (lower bound sharp at alpha=1)",
        worst < 1e-6,
        f"max relative error {worst:.2e} (< 1e-6)",
    )


def test_criterion_05_alpha_degeneration():
    params = fig1_with_alpha(0.999)
    worst = 0.0
    for u in (-15.0, -20.0, -40.0):
        est = series.explosion_time(params, u, n_max=100).value
        ref = classical.explosion_time(params, u)
        worst = max(worst, abs(est - ref) / ref)
    report(
        "criterion 5 (alpha->1 degeneration of the series estimate)",
        worst < 2e-2,
        f"max relative error {worst:.2e} (< 2e-2)",
    )


def test_criterion_06_cross_oracle(fig1):
    start = time.time()
    worst = 0.0
    for u in (-15.0, -20.0, -40.0):
        t_vie = vie.blowup_time_oracle(fig1, u, rel_tol=0.0, max_steps=1 << 14)
        t_series = series.explosion_time(fig1, u, n_max=100).value
        worst = max(worst, abs(t_vie - t_series) / t_series)
    elapsed = time.time() - start
    report(
        "criterion 6 (VIE oracle vs series estimate at 2^14 steps)",
        worst < 2e-2 and elapsed < 120.0,
        f"max relative gap {worst:.2e} (< 2e-2), elapsed={elapsed:.1f}s (< 120s)",
    )


def test_criterion_07_boundedness_caps(fig1):
    rc = riccati_coeffs(fig1, -5.0)
    cap_c = -rc.e0 - math.sqrt(rc.e1)
    sol_c = vie.solve_vie(fig1, -5.0, 10.0, 4096)
    margin_c = min(cap_c - float(sol_c.values.max()), float(sol_c.values.min()))

    rc = riccati_coeffs(fig1, 0.5)
    cap_d = math.sqrt(rc.e1) - rc.e0
    sol_d = vie.solve_vie(fig1, 0.5, 10.0, 4096)
    margin_d = min(float(sol_d.values.min()) + cap_d, -float(sol_d.values.max()))

    report(
        "criterion 7 (case C/D boundedness caps on [0, 10])",
        not sol_c.blew_up and not sol_d.blew_up and margin_c >= 0.0 and margin_d >= 0.0,
        f"case C margin {margin_c:.4f}, case D margin {margin_d:.4f} (both >= 0)",
    )


def test_criterion_08_coefficient_asymptotics(fig1):
    alpha = fig1.alpha
    n = 200
    state = series.series_coefficients(fig1, -20.0, n)
    radius = series.explosion_time(fig1, -20.0, n_max=n).value ** alpha
    log_ratio = (
        state.log_abs()[n - 1]
        + (n + 1) * math.log(radius)
        + (1.0 - alpha) * math.log(n)
        + 2.0 * math.lgamma(alpha)
        - alpha * math.log(alpha)
        - math.lgamma(2.0 * alpha)
    )
    ratio = math.exp(log_ratio)
    report(
        "criterion 8 (coefficient growth profile at n=200)",
        abs(ratio - 1.0) < 0.05,
        f"normalized ratio {ratio:.4f} (within 5% of 1)",
    )


def test_criterion_09_convergence_acceleration(fig1):
    state = series.series_coefficients(fig1, -20.0, 200)
    refined_gap = abs(
        series.refined_time_estimate(state, 100) - series.refined_time_estimate(state, 200)
    )
    raw_gap = abs(
        series.raw_time_estimate(state, 100) - series.raw_time_estimate(state, 200)
    )
    report(
        "criterion 9 (refined estimator converges faster than raw)",
        refined_gap < raw_gap,
        f"|refined(100)-refined(200)|={refined_gap:.2e} < |raw(100)-raw(200)|={raw_gap:.2e}",
    )


def test_criterion_10_critical_roundtrip(fig1):
    t_max = critical.maturity_boundary(fig1, "lower")
    maturities = np.geomspace(t_max / 100.0, 0.95 * t_max, 10)
    worst = 0.0
    roots = []
    for T in maturities:
        res = critical.lower_critical_moment(fig1, float(T))
        worst = max(worst, res.residual / float(T))
        roots.append(res.u_critical)
    nondecreasing = all(a <= b for a, b in zip(roots, roots[1:]))
    report(
        "criterion 10 (critical-moment roundtrip over 10 maturities)",
        worst < 1e-6 and nondecreasing,
        f"max residual/T {worst:.2e} (< 1e-6), u- nondecreasing: {nondecreasing}",
    )


def test_criterion_11_small_maturity_order(fig1):
    t_max = critical.maturity_boundary(fig1, "lower")
    # decades below the boundary, deep enough that the decay is asymptotic
    maturities = [0.8 * t_max * 10.0**-k for k in (2, 3, 4, 5)]
    moments = [critical.lower_critical_moment(fig1, T).u_critical for T in maturities]
    slope = float(np.polyfit(np.log(maturities), np.log(np.abs(moments)), 1)[0])
    report(
        "criterion 11 (small-maturity order of the critical moment)",
        abs(slope + fig1.alpha) < 0.05,
        f"log-log slope {slope:.4f} vs -alpha = {-fig1.alpha} (within 0.05)",
    )


def test_criterion_12_lee_slope_range(fig1):
    t_max = critical.maturity_boundary(fig1, "lower")
    maturities = np.geomspace(t_max / 100.0, 0.95 * t_max, 10)
    normalized = []
    moments = []
    for T in maturities:
        slope = critical.lee_left_wing_slope(fig1, float(T))
        normalized.append(slope * float(T))
        moments.append(critical.lower_critical_moment(fig1, float(T)).u_critical)
    in_range = all(0.0 < s <= 2.0 for s in normalized)
    # slope*T is increasing in u^-, so the two sequences must be co-monotone
    consistent = all(
        (s2 - s1) * (u2 - u1) >= 0.0
        for s1, s2, u1, u2 in zip(normalized, normalized[1:], moments, moments[1:])
    )
    report(
        "criterion 12 (Lee wing slope range and consistency)",
        in_range and consistent,
        f"slope*T in ({min(normalized):.4f}, {max(normalized):.4f}], consistent: {consistent}",
    )


def test_criterion_13_polylog_approximation(fig1):
    tstar = series.explosion_time(fig1, -20.0, n_max=100).value
    worst = 0.0
    for frac in (0.3, 0.6, 0.9):
        t = frac * tstar
        approx = series.approx_solution(fig1, -20.0, t, n_corrections=10)
        reference = float(vie.solve_vie(fig1, -20.0, t, 4096).values[-1].real)
        worst = max(worst, abs(approx - reference) / abs(reference))
    report(
        "criterion 13 (polylog profile approximation of the solution)",
        worst < 1e-2,
        f"max relative error {worst:.2e} (< 1e-2)",
    )
