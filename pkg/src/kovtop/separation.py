"""Separated variables, admissible intervals, and state reconstruction.

On the invariant set N the motion separates in the coordinates

    s1 = (x1 x2 + z1 z2 + r^2) / (2 sqrt(x1 x2)),
    s2 = (x1 x2 + z1 z2 - r^2) / (2 sqrt(x1 x2)),

which on the leaf {M = m, L = l} obey the decoupled system

    ds1/dt = 1/2 sqrt((a^2 - s1^2) Phi(s1)),
    ds2/dt = 1/2 sqrt((b^2 - s2^2) Phi(s2)),
    Phi(s) = 4 m s^2 - 4 l s + (l^2 - 1)/m.

Phi always has the two real roots (l -+ 1)/(2m) (its discriminant is the
constant 16).  The coordinates satisfy s1^2 >= a^2 and s2^2 <= b^2, so
real motion oscillates where Phi(s1) <= 0 and Phi(s2) >= 0.

Radical conventions for the reconstruction
------------------------------------------
The closed-form inverse map expresses the chart variables through
(s1, s2) and bare radicals.  Four independent sign flags pin them down:

    sqrt(s1^2 - a^2) := eps1 * rho1,          rho1 = sqrt(s1^2 - a^2) >= 0
    sqrt(s2^2 - b^2) := i * eps2 * rho2,      rho2 = sqrt(b^2 - s2^2) >= 0
    sqrt(Phi(s1))    := i * sig1 * phi1,      phi1 = sqrt(-Phi(s1))   >= 0
    sqrt(Phi(s2))    := sig2 * phi2,          phi2 = sqrt(Phi(s2))    >= 0

and every composite radical is the product of the individual ones.
This makes the chart conjugate-symmetric exactly, so the reconstructed
state is real for any of the 16 flag choices, and each choice lands on
the leaf (verified by the membership tests rather than trusted).

The flags also encode the velocity: on the canonical sheet s1 > 0 the
initial directions of the separated motion are

    sign(ds1/dt) = eps1 * sig1,   sign(ds2/dt) = eps2 * sig2,

a coupling measured against the full equations of motion and pinned by
a regression test.  Components of the admissible set with s1 < 0 are a
redundant mirror sheet: reconstruction there is valid but the chart
maps the state back to (-s1, -s2), so the flow comparison helpers
insist on s1 > 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from . import _hooks
from .dynamics import IntegratorConfig, integrate, time_grid
from .manifold import ChartDomainError, ComplexChart, chart_to_state, state_to_chart
from .statespace import BodyParams, PhaseState

__all__ = [
    "SeparationConstants",
    "SeparatedPoint",
    "PhiPoly",
    "SeparatedPath",
    "CrosscheckReport",
    "InadmissiblePointError",
    "NegativeRadicandError",
    "phi",
    "phi_roots",
    "phi_poly",
    "psi",
    "energy_on_leaf",
    "s_from_state",
    "relation6_residual",
    "admissible_intervals",
    "validate_point",
    "separated_rhs",
    "reconstruct",
    "reconstruct_chart",
    "quartic_roots",
    "oscillation_weight",
    "integrate_separated",
    "crosscheck",
    "random_leaf_point",
]

Interval = tuple[float, float]


class InadmissiblePointError(ValueError):
    """Point outside the admissible region of the separated system."""


class NegativeRadicandError(ValueError):
    """A radicand that should be nonnegative came out negative."""


@dataclass(frozen=True)
class SeparationConstants:
    """Leaf constants (m, l): values of the integrals M and L.

    m must be nonzero (Phi is undefined at m = 0).  Leaf semantics
    require l >= 0 since L is a nonnegative root; the polynomial helpers
    (phi, psi, intervals) accept any real l so that diagram sweeps can
    straddle l = 0, and the leaf operations validate l >= 0 themselves.
    """

    m: float
    l: float

    def __post_init__(self):
        if not (math.isfinite(self.m) and math.isfinite(self.l)):
            raise ValueError(f"constants must be finite, got m={self.m}, l={self.l}")
        if self.m == 0.0:
            raise ValueError("m = 0 is outside the separated description (Phi undefined)")


@dataclass(frozen=True)
class SeparatedPoint:
    """Point (s1, s2) plus the four radical sign flags."""

    s1: float
    s2: float
    eps1: int = 1
    eps2: int = 1
    sig1: int = 1
    sig2: int = 1

    def __post_init__(self):
        for name in ("eps1", "eps2", "sig1", "sig2"):
            v = getattr(self, name)
            if v not in (-1, 1):
                raise ValueError(f"{name} must be +1 or -1, got {v!r}")


@dataclass(frozen=True)
class PhiPoly:
    """Phi with its closed-form roots (l-1)/(2m) and (l+1)/(2m)."""

    m: float
    l: float
    roots: tuple[float, float]


def phi(s: float, c: SeparationConstants) -> float:
    """Phi(s) = 4 m s^2 - 4 l s + (l^2 - 1)/m."""
    return 4.0 * c.m * s * s - 4.0 * c.l * s + (c.l * c.l - 1.0) / c.m


def phi_roots(c: SeparationConstants) -> tuple[float, float]:
    """Roots of Phi in increasing order; always real and distinct."""
    lo = (c.l - 1.0) / (2.0 * c.m)
    hi = (c.l + 1.0) / (2.0 * c.m)
    return (lo, hi) if lo <= hi else (hi, lo)


def phi_poly(c: SeparationConstants) -> PhiPoly:
    return PhiPoly(m=c.m, l=c.l, roots=phi_roots(c))


def psi(s1: float, s2: float, c: SeparationConstants) -> float:
    """Polar companion of Phi: psi(s, s) = Phi(s), symmetric in (s1, s2)."""
    return 4.0 * c.m * s1 * s2 - 2.0 * c.l * (s1 + s2) + (c.l * c.l - 1.0) / c.m


def energy_on_leaf(c: SeparationConstants, params: BodyParams) -> float:
    """H determined by the leaf constants: (l^2 - 1 - 2 p^2 m^2)/(2m)."""
    if c.l < 0:
        raise ValueError(f"leaf requires l >= 0, got {c.l}")
    return (c.l * c.l - 1.0 - 2.0 * params.p2 * c.m * c.m) / (2.0 * c.m)


def s_from_state(state: PhaseState, params: BodyParams) -> tuple[float, float]:
    """Separated coordinates of a state (requires x1 x2 != 0)."""
    chart = state_to_chart(state)
    p = (chart.x1 * chart.x2).real
    if abs(p) < 1e-10:
        raise ChartDomainError(f"x1*x2 = {p:.3e} too close to the chart singularity")
    z = (chart.z1 * chart.z2).real
    q = math.sqrt(p)
    return ((p + z + params.r2) / (2.0 * q), (p + z - params.r2) / (2.0 * q))


def relation6_residual(state: PhaseState, c: SeparationConstants, params: BodyParams) -> float:
    """Residual of the eliminated level-set relation

        m (x1 x2 + z1 z2) - l sqrt(x1 x2)
            + sqrt(m^2 r^4 - m r^2 (x1 + x2) + x1 x2) = 0,

    with the nonnegative branch of the radical.  Vanishes on the leaf
    wherever m (s1 + s2) <= l, which covers the whole canonical sheet.

    On real charts the inner radicand is the perfect square
    (m r^2 - Re x1)^2 + (Im x1)^2 and cannot be negative; the distinct
    NegativeRadicandError remains as a guard against corrupted input.
    """
    if c.l < 0:
        raise ValueError(f"leaf requires l >= 0, got {c.l}")
    chart = state_to_chart(state)
    p = (chart.x1 * chart.x2).real
    if abs(p) < 1e-10:
        raise ChartDomainError("x1*x2 = 0: relation undefined")
    z = (chart.z1 * chart.z2).real
    rad = (c.m * params.r2 - chart.x1.real) ** 2 + chart.x1.imag**2
    if not rad >= 0.0:
        raise NegativeRadicandError(f"inner radicand {rad!r} not nonnegative")
    return c.m * (p + z) - c.l * math.sqrt(p) + math.sqrt(rad)


# ---------------------------------------------------------------------------
# Admissible region
# ---------------------------------------------------------------------------

def _intersect(pieces_a: list[Interval], pieces_b: list[Interval]) -> list[Interval]:
    out = []
    for alo, ahi in pieces_a:
        for blo, bhi in pieces_b:
            lo, hi = max(alo, blo), min(ahi, bhi)
            snap = 1e-12 * max(1.0, abs(lo), abs(hi))
            if hi >= lo:
                out.append((lo, hi))
            elif hi >= lo - snap:
                out.append((lo, lo))  # degenerate single point up to rounding
    return sorted(out)


def admissible_intervals(
    c: SeparationConstants, params: BodyParams
) -> tuple[list[Interval], list[Interval]]:
    """Connected components of the admissible sets for s1 and s2.

    s1 ranges over {|s| >= a} cap {Phi <= 0} and s2 over
    {|s| <= b} cap {Phi >= 0}.  Endpoints come from the sorted values
    {-a, a, -b, b, (l-1)/(2m), (l+1)/(2m)}; components may be single
    points (turning configurations) and, for m < 0, the s1 components
    are half-lines.  Empty lists mean no real motion for these
    constants.
    """
    r_lo, r_hi = phi_roots(c)
    inf = math.inf
    if c.m > 0:
        phi_nonpos = [(r_lo, r_hi)]
        phi_nonneg = [(-inf, r_lo), (r_hi, inf)]
    else:
        phi_nonpos = [(-inf, r_lo), (r_hi, inf)]
        phi_nonneg = [(r_lo, r_hi)]
    a, b = params.a, params.b
    s1 = _intersect(phi_nonpos, [(-inf, -a), (a, inf)])
    s2 = _intersect(phi_nonneg, [(-b, b)])
    return s1, s2


def _component_containing(
    comps: list[Interval], s: float, tol: float = 1e-9
) -> Interval | None:
    pad = tol * max(1.0, abs(s))
    for lo, hi in comps:
        if lo - pad <= s <= hi + pad:
            return (lo, hi)
    return None


def validate_point(
    p: SeparatedPoint, c: SeparationConstants, params: BodyParams, tol: float = 1e-9
) -> None:
    """Raise InadmissiblePointError unless (s1, s2) lies in the closure
    of the admissible region for the constants c."""
    s1c, s2c = admissible_intervals(c, params)
    if _component_containing(s1c, p.s1, tol) is None:
        raise InadmissiblePointError(
            f"s1 = {p.s1:.6g} outside the admissible components {s1c} for (m, l) = ({c.m:g}, {c.l:g})"
        )
    if _component_containing(s2c, p.s2, tol) is None:
        raise InadmissiblePointError(
            f"s2 = {p.s2:.6g} outside the admissible components {s2c} for (m, l) = ({c.m:g}, {c.l:g})"
        )


def separated_rhs(
    p: SeparatedPoint, c: SeparationConstants, params: BodyParams
) -> tuple[float, float]:
    """Signed velocities (sig1 * sqrt(q1)/2, sig2 * sqrt(q2)/2).

    q1 = (a^2 - s1^2) Phi(s1) and q2 = (b^2 - s2^2) Phi(s2) are both
    nonnegative on the admissible region; values below -1e-12 (scaled)
    raise InadmissiblePointError.
    """
    q1 = (params.a**2 - p.s1**2) * phi(p.s1, c)
    q2 = (params.b**2 - p.s2**2) * phi(p.s2, c)
    scale1 = max(1.0, abs(params.a**2 - p.s1**2), abs(phi(p.s1, c)))
    scale2 = max(1.0, abs(params.b**2 - p.s2**2), abs(phi(p.s2, c)))
    if q1 < -1e-12 * scale1 or (params.a**2 - p.s1**2) > 1e-9 * scale1:
        raise InadmissiblePointError(f"s1 = {p.s1:.6g} outside the oscillation region (q1 = {q1:.3e})")
    if q2 < -1e-12 * scale2 or (params.b**2 - p.s2**2) < -1e-9 * scale2:
        raise InadmissiblePointError(f"s2 = {p.s2:.6g} outside the oscillation region (q2 = {q2:.3e})")
    v1 = 0.5 * math.sqrt(max(q1, 0.0))
    v2 = 0.5 * math.sqrt(max(q2, 0.0))
    return (p.sig1 * v1, p.sig2 * v2)


# ---------------------------------------------------------------------------
# Reconstruction
# ---------------------------------------------------------------------------

def reconstruct_chart(p: SeparatedPoint, c: SeparationConstants, params: BodyParams):
    """Chart variables at the separated point under the radical flags."""
    if c.l < 0:
        raise ValueError(f"leaf requires l >= 0, got {c.l}")
    validate_point(p, c, params)
    s1, s2 = p.s1, p.s2
    d = s1 - s2  # never zero: |s1| >= a > b >= |s2|
    rho1 = math.sqrt(max(s1 * s1 - params.a**2, 0.0))
    rho2 = math.sqrt(max(params.b**2 - s2 * s2, 0.0))
    ph1 = math.sqrt(max(-phi(s1, c), 0.0))
    ph2 = math.sqrt(max(phi(s2, c), 0.0))
    r = params.r

    mutation = _hooks.active()
    sq_phi12 = 1j * p.sig1 * p.sig2 * ph1 * ph2
    sq_cross = 1j * p.eps1 * p.eps2 * rho1 * rho2
    sq_b_phi1 = -p.eps2 * p.sig1 * rho2 * ph1
    sq_a_phi2 = p.eps1 * p.sig2 * rho1 * ph2
    if mutation == "recon_phi_product":
        sq_phi12 = -sq_phi12
    elif mutation == "recon_cross_ab":
        sq_cross = -sq_cross
    elif mutation == "recon_w3_first":
        sq_b_phi1 = -sq_b_phi1
    elif mutation == "recon_w3_second":
        sq_a_phi2 = -sq_a_phi2
    sqrt1 = p.eps1 * rho1
    sqrt2 = 1j * p.eps2 * rho2

    ps = psi(s1, s2, c)
    den_m = ps - sq_phi12
    den_p = ps + sq_phi12
    # |den| = 2|s1 - s2| exactly (psi^2 - Phi1 Phi2 = 4 (s1 - s2)^2); the
    # guard only catches corrupted inputs.
    for val, label in ((den_m, "psi - sqrt(Phi1 Phi2)"), (den_p, "psi + sqrt(Phi1 Phi2)")):
        if abs(val) < 1e-14 * max(1.0, abs(ps)):
            raise ZeroDivisionError(f"vanishing denominator {label} at (s1, s2) = ({s1}, {s2})")

    x1 = -(params.r2 / (2.0 * d * d)) * den_p
    x2 = -(params.r2 / (2.0 * d * d)) * den_m
    y1 = 2.0 * ((2.0 * s1 * s2 - params.p2) - 2.0 * sq_cross) / den_m
    y2 = 2.0 * ((2.0 * s1 * s2 - params.p2) + 2.0 * sq_cross) / den_p
    z1 = (r / d) * (sqrt1 + sqrt2)
    z2 = (r / d) * (sqrt1 - sqrt2)
    w1 = r * (p.sig2 * ph2 - 1j * p.sig1 * ph1) / den_m
    w2 = r * (p.sig2 * ph2 + 1j * p.sig1 * ph1) / den_p
    w3 = (sq_b_phi1 - sq_a_phi2) / d
    return ComplexChart(x1=x1, x2=x2, y1=y1, y2=y2, z1=z1, z2=z2, w1=w1, w2=w2, w3=float(w3))


def reconstruct(p: SeparatedPoint, c: SeparationConstants, params: BodyParams) -> PhaseState:
    """Phase state at the separated point; lies on the leaf {M=m, L=l}
    for every choice of the four sign flags."""
    return chart_to_state(reconstruct_chart(p, c, params))


# ---------------------------------------------------------------------------
# Separated flow
# ---------------------------------------------------------------------------

def quartic_roots(
    c: SeparationConstants, params: BodyParams, which: str
) -> tuple[float, float, float, float]:
    """Sorted roots of the oscillation quartic (c^2 - s^2) Phi(s)."""
    cc = params.a if which == "s1" else params.b
    r_lo, r_hi = phi_roots(c)
    return tuple(sorted((-cc, cc, r_lo, r_hi)))


def oscillation_weight(roots, interval: Interval, lead_abs: float):
    """Residual quartic factor W with q(s) = (s - lo)(hi - s) W(s).

    W is smooth and positive on the oscillation interval, so the
    substitution s = mid + half_width * sin(u) turns ds/dt = sqrt(q)/2
    into the regular equation du/dt = sqrt(W)/2.
    """
    lo, hi = interval
    others = list(roots)
    for endpoint in (lo, hi):
        others.pop(min(range(len(others)), key=lambda i: abs(others[i] - endpoint)))
    o1, o2 = others
    mid = 0.5 * (lo + hi)
    sgn = 1.0 if (mid - o1) * (mid - o2) > 0 else -1.0

    def weight(s: float) -> float:
        return lead_abs * sgn * (s - o1) * (s - o2)

    return weight


@dataclass(frozen=True)
class SeparatedPath:
    """Sampled solution of the separated system with direction flags."""

    times: np.ndarray
    s1: np.ndarray
    s2: np.ndarray
    sig1: np.ndarray
    sig2: np.ndarray


def _oscillation_setup(c, params, which, s0, flag_product, tol=1e-9):
    comps_s1, comps_s2 = admissible_intervals(c, params)
    comps = comps_s1 if which == "s1" else comps_s2
    comp = _component_containing(comps, s0, tol)
    if comp is None:
        raise InadmissiblePointError(f"{which} = {s0:.6g} not inside any admissible component {comps}")
    lo, hi = comp
    span = hi - lo
    if span <= 1e-12 * max(1.0, abs(lo)):
        return None  # degenerate single point: equilibrium of this variable
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError(
            f"{which} component {comp} is unbounded; no periodic oscillation to integrate"
        )
    mid, half = 0.5 * (lo + hi), 0.5 * span
    weight = oscillation_weight(quartic_roots(c, params, which), comp, 4.0 * abs(c.m))
    arg = min(1.0, max(-1.0, (s0 - mid) / half))
    u0 = math.asin(arg) if flag_product > 0 else math.pi - math.asin(arg)
    return mid, half, weight, u0


def integrate_separated(
    p0: SeparatedPoint,
    c: SeparationConstants,
    params: BodyParams,
    t_end: float,
    sample_dt: float,
) -> SeparatedPath:
    """Integrate the separated system through the turning points.

    Each oscillation interval [lo, hi] is traversed in the regularized
    angle u with s = mid + half*sin(u), du/dt = sqrt(W(s))/2, which is
    smooth at the turning points; direction flags flip automatically as
    cos(u) changes sign.  The initial directions are eps1*sig1 and
    eps2*sig2 (the measured coupling of the radical flags).  Degenerate
    single-point components yield constant paths.
    """
    grid = time_grid(t_end, sample_dt)
    setups = (
        _oscillation_setup(c, params, "s1", p0.s1, p0.eps1 * p0.sig1),
        _oscillation_setup(c, params, "s2", p0.s2, p0.eps2 * p0.sig2),
    )
    s_out = [None, None]
    sig_out = [None, None]
    for i, setup in enumerate(setups):
        s0 = (p0.s1, p0.s2)[i]
        d0 = (p0.eps1 * p0.sig1, p0.eps2 * p0.sig2)[i]
        if setup is None:
            s_out[i] = np.full(len(grid), s0)
            sig_out[i] = np.full(len(grid), d0, dtype=np.int8)
            continue
        mid, half, weight, u0 = setup

        def udot(t, u, mid=mid, half=half, weight=weight):
            return [0.5 * math.sqrt(max(weight(mid + half * math.sin(u[0])), 0.0))]

        sol = solve_ivp(
            udot, (0.0, t_end), [u0], method="DOP853",
            rtol=1e-12, atol=1e-14, t_eval=grid,
        )
        if not sol.success:
            raise RuntimeError(f"separated integration failed: {sol.message}")
        u = sol.y[0]
        s_out[i] = mid + half * np.sin(u)
        sig_out[i] = np.where(np.cos(u) >= 0.0, 1, -1).astype(np.int8)
    return SeparatedPath(times=grid, s1=s_out[0], s2=s_out[1], sig1=sig_out[0], sig2=sig_out[1])


@dataclass(frozen=True)
class CrosscheckReport:
    """Side-by-side comparison of the full and separated descriptions."""

    times: np.ndarray
    s1_full: np.ndarray
    s2_full: np.ndarray
    s1_sep: np.ndarray
    s2_sep: np.ndarray
    max_ds1: float
    max_ds2: float


def crosscheck(
    p0: SeparatedPoint,
    c: SeparationConstants,
    params: BodyParams,
    t_end: float,
    sample_dt: float | None = None,
    rel_tol: float = 1e-10,
    abs_tol: float = 1e-12,
) -> CrosscheckReport:
    """Reconstruct, run the full equations of motion, and compare the
    chart-extracted (s1, s2) against the separated integration.

    Only the canonical sheet s1 > 0 is comparable: the chart maps mirror
    points to (-s1, -s2), so those are rejected with a hint.
    """
    if p0.s1 <= 0:
        raise InadmissiblePointError(
            f"s1 = {p0.s1:.6g} lies on the mirror sheet; compare at (-s1, -s2) = "
            f"({-p0.s1:.6g}, {-p0.s2:.6g}) instead"
        )
    dt = sample_dt if sample_dt is not None else t_end / 800.0
    state0 = reconstruct(p0, c, params)
    traj = integrate(state0, IntegratorConfig(t_end=t_end, sample_dt=dt, rel_tol=rel_tol, abs_tol=abs_tol), params)
    n = len(traj)
    s1_full = np.empty(n)
    s2_full = np.empty(n)
    for i in range(n):
        s1_full[i], s2_full[i] = s_from_state(traj.state(i), params)
    sep = integrate_separated(p0, c, params, t_end, dt)
    max_ds1 = float(np.max(np.abs(s1_full - sep.s1)))
    max_ds2 = float(np.max(np.abs(s2_full - sep.s2)))
    return CrosscheckReport(
        times=traj.times, s1_full=s1_full, s2_full=s2_full,
        s1_sep=sep.s1, s2_sep=sep.s2, max_ds1=max_ds1, max_ds2=max_ds2,
    )


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

def random_leaf_point(
    params: BodyParams,
    rng: np.random.Generator,
    m_range: tuple[float, float] = (0.1, 2.0),
    l_range: tuple[float, float] = (0.0, 6.0),
    allow_negative_m: bool = True,
    margin: float = 0.05,
    ray_span: float = 1.5,
    max_tries: int = 20000,
) -> tuple[SeparationConstants, SeparatedPoint]:
    """Draw admissible leaf constants and a canonical-sheet point.

    Rejection-samples (m, l) until both variables admit a component with
    s1 > 0, then picks interior values (margin away from the turning
    points, a finite window of length ray_span on half-line components)
    and random sign flags.
    """
    for _ in range(max_tries):
        m = rng.uniform(*m_range)
        if allow_negative_m and rng.random() < 0.5:
            m = -m
        l = rng.uniform(*l_range)
        c = SeparationConstants(m=m, l=l)
        comps1, comps2 = admissible_intervals(c, params)
        comps1 = [(lo, hi) for lo, hi in comps1 if lo > 0]
        if not comps1 or not comps2:
            continue
        lo1, hi1 = comps1[rng.integers(len(comps1))]
        if not math.isfinite(hi1):
            hi1 = lo1 + ray_span
        lo2, hi2 = comps2[rng.integers(len(comps2))]
        if hi1 - lo1 < 1e-3 or hi2 - lo2 < 1e-3:
            continue
        s1 = rng.uniform(lo1 + margin * (hi1 - lo1), hi1 - margin * (hi1 - lo1))
        s2 = rng.uniform(lo2 + margin * (hi2 - lo2), hi2 - margin * (hi2 - lo2))
        flags = [int(v) for v in rng.choice([-1, 1], size=4)]
        return c, SeparatedPoint(s1=s1, s2=s2, eps1=flags[0], eps2=flags[1], sig1=flags[2], sig2=flags[3])
    raise RuntimeError("failed to sample an admissible leaf point")
