"""Periods and time-parameterization of the separated oscillations.

Each separated variable moves by ds/dt = +-sqrt(q(s))/2 where q is a
quartic with four real roots, and oscillates between two adjacent roots
[e-, e+].  The period is a complete elliptic integral of the first
kind,

    T = 8 K(k) / sqrt(lead * (r3 - r1) * (r4 - r2)),

with roots r1 <= r2 <= r3 <= r4, lead the absolute leading coefficient,
and modulus determined by which adjacent pair bounds the motion:

    outer interval (r1, r2) or (r3, r4):
        k^2 = (r2 - r1)(r4 - r3) / ((r3 - r1)(r4 - r2))
    inner interval (r2, r3):
        k^2 = (r3 - r2)(r4 - r1) / ((r3 - r1)(r4 - r2)).

K is evaluated as Carlson's R_F(0, 1 - k^2, 1) by the duplication
algorithm.  The time course s(t) is recovered by reducing t modulo T
and inverting the incomplete quadrature with a bracketed root-finder;
everything is cross-checked against the regularized oscillation ODE.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.optimize import brentq

from .separation import (
    SeparationConstants,
    admissible_intervals,
    oscillation_weight,
    quartic_roots,
)
from .statespace import BodyParams

__all__ = [
    "QuarticSpec",
    "quartic_spec",
    "carlson_rf",
    "period",
    "period_ode",
    "s_of_t",
]

# Stop the duplication loop once the series residual is below 1e-16,
# two digits under the 1e-12 accuracy contract even before the series.
_RF_SERIES_TOL = 1e-16


def carlson_rf(x: float, y: float, z: float) -> float:
    """Carlson's symmetric integral R_F(x, y, z) by duplication.

    Requires x, y, z >= 0 with at most one of them zero.  Relative
    error is far below 1e-12.
    """
    x, y, z = float(x), float(y), float(z)
    if min(x, y, z) < 0.0:
        raise ValueError(f"R_F needs nonnegative arguments, got {(x, y, z)}")
    if sorted((x, y, z))[1] == 0.0:
        raise ValueError("R_F diverges when two arguments vanish")
    A = (x + y + z) / 3.0
    q = max(abs(A - x), abs(A - y), abs(A - z)) / (3.0 * _RF_SERIES_TOL) ** (1.0 / 6.0)
    f = 1.0
    while q > abs(A) * f:
        lam = math.sqrt(x) * math.sqrt(y) + math.sqrt(x) * math.sqrt(z) + math.sqrt(y) * math.sqrt(z)
        x = 0.25 * (x + lam)
        y = 0.25 * (y + lam)
        z = 0.25 * (z + lam)
        A = 0.25 * (A + lam)
        f *= 4.0
    # (A_n - x_n) = (A_0 - x_0)/4^n, so the scaled deviations can be read
    # off the current iterates directly.
    X = (A - x) / A
    Y = (A - y) / A
    Z = -(X + Y)
    e2 = X * Y - Z * Z
    e3 = X * Y * Z
    series = 1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0
    return series / math.sqrt(A)


@dataclass(frozen=True)
class QuarticSpec:
    """Oscillation quartic: sorted roots, |leading coefficient|, interval."""

    roots: tuple[float, float, float, float]
    lead: float
    interval: tuple[float, float]

    def __post_init__(self):
        r = self.roots
        if any(r[i] > r[i + 1] for i in range(3)):
            raise ValueError(f"roots must be sorted, got {r}")
        if not self.lead > 0:
            raise ValueError("leading coefficient must be positive")

    @property
    def degenerate(self) -> bool:
        lo, hi = self.interval
        return hi - lo <= 1e-12 * max(1.0, abs(lo))


def quartic_spec(
    c: SeparationConstants,
    params: BodyParams,
    which: str = "s1",
    component: int = 0,
) -> QuarticSpec:
    """Build the oscillation quartic for one admissible component of s1 or s2.

    Raises ValueError when the variable has no admissible component or
    the requested component is a half-line (m < 0 runaway branches).
    """
    if which not in ("s1", "s2"):
        raise ValueError(f"which must be 's1' or 's2', got {which!r}")
    comps = admissible_intervals(c, params)[0 if which == "s1" else 1]
    if not comps:
        raise ValueError(f"no admissible {which} component for (m, l) = ({c.m:g}, {c.l:g})")
    lo, hi = comps[component]
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError(f"{which} component {(lo, hi)} is unbounded; no oscillation period")
    return QuarticSpec(
        roots=quartic_roots(c, params, which),
        lead=4.0 * abs(c.m),
        interval=(lo, hi),
    )


def _interval_index(spec: QuarticSpec) -> int:
    """Index i such that the interval is (roots[i], roots[i+1])."""
    lo, hi = spec.interval
    r = spec.roots
    scale = max(1.0, *(abs(v) for v in r))
    best, besterr = None, math.inf
    for i in range(3):
        err = abs(r[i] - lo) + abs(r[i + 1] - hi)
        if err < besterr:
            best, besterr = i, err
    if besterr > 1e-9 * scale:
        raise ValueError(f"interval {spec.interval} does not match adjacent roots of {r}")
    return best


def period(spec: QuarticSpec) -> float:
    """Closed-form oscillation period; inf for degenerate intervals and
    separatrix configurations (modulus 1)."""
    if spec.degenerate:
        return math.inf
    r1, r2, r3, r4 = spec.roots
    i = _interval_index(spec)
    denom = (r3 - r1) * (r4 - r2)
    if denom <= 0.0:
        return math.inf
    if i == 1:
        k2 = (r3 - r2) * (r4 - r1) / denom
    else:
        k2 = (r2 - r1) * (r4 - r3) / denom
    if k2 >= 1.0 - 1e-14:
        return math.inf
    big_k = carlson_rf(0.0, 1.0 - k2, 1.0)
    return 8.0 * big_k / math.sqrt(spec.lead * denom)


def _weight(spec: QuarticSpec):
    return oscillation_weight(spec.roots, spec.interval, spec.lead)


def period_ode(spec: QuarticSpec, rtol: float = 1e-12, atol: float = 1e-14) -> float:
    """Turning-point return time measured on the regularized ODE.

    Integrates du/dt = sqrt(W)/2 from u = -pi/2 until u reaches 3pi/2
    (one full cycle); serves as the independent oracle for period().
    """
    if spec.degenerate:
        return math.inf
    lo, hi = spec.interval
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    weight = _weight(spec)
    wmin = min(weight(mid + half * math.sin(u)) for u in np.linspace(-math.pi / 2, math.pi / 2, 513))
    if wmin <= 1e-12:
        return math.inf
    horizon = 1.5 * 4.0 * math.pi / math.sqrt(wmin) + 1.0

    def udot(t, u):
        return [0.5 * math.sqrt(max(weight(mid + half * math.sin(u[0])), 0.0))]

    def done(t, u):
        return u[0] - 3.0 * math.pi / 2.0

    done.terminal = True
    done.direction = 1.0
    sol = solve_ivp(udot, (0.0, horizon), [-math.pi / 2.0], method="DOP853",
                    rtol=rtol, atol=atol, events=done)
    if not sol.t_events[0].size:
        raise RuntimeError("oscillation did not complete a cycle within the horizon")
    return float(sol.t_events[0][0])


def _quarter_times(spec: QuarticSpec):
    """Travel time tau(s) from e- to s (monotone), and the half period."""
    lo, hi = spec.interval
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    weight = _weight(spec)

    def integrand(u: float) -> float:
        return 2.0 / math.sqrt(weight(mid + half * math.sin(u)))

    def tau(s: float) -> float:
        arg = min(1.0, max(-1.0, (s - mid) / half))
        val, _ = quad(integrand, -math.pi / 2.0, math.asin(arg), epsabs=1e-14, epsrel=1e-13, limit=200)
        return val

    half_period, _ = quad(integrand, -math.pi / 2.0, math.pi / 2.0, epsabs=1e-14, epsrel=1e-13, limit=200)
    return tau, half_period


def s_of_t(spec: QuarticSpec, s0: float, sig0: int, t: float) -> tuple[float, int]:
    """Position and direction flag after time t from (s0, sig0).

    Reduces t modulo the period and inverts the monotone quadrature
    tau(s) with a bracketed root-finder.  At the exact turning instants
    the direction flag reports the outgoing branch.
    """
    lo, hi = spec.interval
    if spec.degenerate:
        return s0, sig0
    if not (lo - 1e-9 <= s0 <= hi + 1e-9):
        raise ValueError(f"s0 = {s0:.6g} outside the oscillation interval {spec.interval}")
    if sig0 not in (-1, 1):
        raise ValueError(f"sig0 must be +1 or -1, got {sig0!r}")
    tau, half_t = _quarter_times(spec)
    full_t = 2.0 * half_t
    theta0 = tau(s0) if sig0 > 0 else full_t - tau(s0)
    theta = math.fmod(theta0 + t, full_t)
    if theta < 0.0:
        theta += full_t
    if theta <= half_t:
        target, sig = theta, 1
    else:
        target, sig = full_t - theta, -1
    if target <= 0.0:
        return lo, sig
    if target >= half_t:
        return hi, sig

    def fn(s: float) -> float:
        return tau(s) - target

    s = brentq(fn, lo, hi, xtol=1e-13, rtol=8.9e-16, maxiter=200)
    return float(s), sig
