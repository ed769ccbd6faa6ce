"""The complex chart, the invariant set N, and its bracket relation.

The chart packs the nine real phase variables into conjugate pairs,

    x1 = (alpha1 - beta2) + i (alpha2 + beta1),   x2 = conj(x1)
    y1 = (alpha1 + beta2) + i (alpha2 - beta1),   y2 = conj(y1)
    z1 = alpha3 + i beta3,                        z2 = conj(z1)
    w1 = omega1 + i omega2,   w2 = conj(w1),      w3 = omega3.

On the domain x1 x2 != 0 the invariant set N (critical points of F on
the level F = 0) is cut out by F1 = 0 and F2 = 0 with

    F1 = sqrt(x1 x2) w3 - (x2 z1 w1 + x1 z2 w2) / sqrt(x1 x2)
    F2 = (i/2) [ (x2/x1)(w1^2 + x1) - (x1/x2)(w2^2 + x2) ],

where sqrt(x1 x2) is the nonnegative real root (x1 x2 = |x1|^2 on real
states).  Both values are real on real states; the imaginary parts are
kept as a free consistency diagnostic.  The induced system on N is
Hamiltonian away from L = 0, and the bracket satisfies {F2, F1} = r^2 L
there up to the global convention sign (measured: the ratio is -1 under
the bracket of the poisson module).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _hooks
from .poisson import integral_FML, lie_poisson_bracket
from .statespace import BodyParams, PhaseState

__all__ = [
    "ComplexChart",
    "ManifoldTolerance",
    "MembershipReport",
    "ChartDomainError",
    "ConjugacyError",
    "DegenerateLeafError",
    "DEFAULT_TOLERANCE",
    "state_to_chart",
    "chart_to_state",
    "F1_F2",
    "on_N",
    "constraint_residuals_chart",
    "bracket_ratio",
]


class ChartDomainError(ValueError):
    """Chart point outside the coordinate domain x1 x2 != 0."""


class ConjugacyError(ValueError):
    """Chart not realizable by a real state (conjugate pairs broken)."""


class DegenerateLeafError(ValueError):
    """L undefined or vanishing where a nonzero value is required."""


@dataclass(frozen=True)
class ComplexChart:
    x1: complex
    x2: complex
    y1: complex
    y2: complex
    z1: complex
    z2: complex
    w1: complex
    w2: complex
    w3: float


@dataclass(frozen=True)
class ManifoldTolerance:
    """Membership thresholds; defaults sit one order above solver drift."""

    eps_f1: float = 1e-8
    eps_f2: float = 1e-8
    eps_domain: float = 1e-10

    def __post_init__(self):
        if not (self.eps_f1 > 0 and self.eps_f2 > 0 and self.eps_domain > 0):
            raise ValueError("tolerances must be positive")


DEFAULT_TOLERANCE = ManifoldTolerance()


@dataclass(frozen=True)
class MembershipReport:
    """Residuals and verdict of the membership test for N."""

    f1: complex
    f2: complex
    f: float
    member: bool
    l: Optional[float]
    symplectic_degenerate: bool

    @property
    def abs_f1(self) -> float:
        return abs(self.f1)

    @property
    def abs_f2(self) -> float:
        return abs(self.f2)

    @property
    def l_defined(self) -> bool:
        return self.l is not None


def state_to_chart(state: PhaseState) -> ComplexChart:
    w, al, be = state.omega, state.alpha, state.beta
    x1 = complex(al[0] - be[1], al[1] + be[0])
    y1 = complex(al[0] + be[1], al[1] - be[0])
    z1 = complex(al[2], be[2])
    w1 = complex(w[0], w[1])
    return ComplexChart(
        x1=x1, x2=x1.conjugate(),
        y1=y1, y2=y1.conjugate(),
        z1=z1, z2=z1.conjugate(),
        w1=w1, w2=w1.conjugate(),
        w3=float(w[2]),
    )


def chart_to_state(chart: ComplexChart, eps_domain: float = 1e-10) -> PhaseState:
    """Invert the chart; requires the conjugate pairs to hold.

    Raises ConjugacyError when some second member differs from the
    conjugate of the first by more than eps_domain * scale.
    """
    scale = max(1.0, abs(chart.x1), abs(chart.y1), abs(chart.z1), abs(chart.w1))
    for name, first, second in (
        ("x", chart.x1, chart.x2),
        ("y", chart.y1, chart.y2),
        ("z", chart.z1, chart.z2),
        ("w", chart.w1, chart.w2),
    ):
        if abs(second - first.conjugate()) > eps_domain * scale:
            raise ConjugacyError(f"{name}2 != conj({name}1); chart has no real preimage")
    a1 = 0.5 * (chart.x1 + chart.y1).real
    a2 = 0.5 * (chart.x1 + chart.y1).imag
    b2 = 0.5 * (chart.y1 - chart.x1).real
    b1 = -0.5 * (chart.y1 - chart.x1).imag
    return PhaseState(
        np.array([chart.w1.real, chart.w1.imag, float(chart.w3)]),
        np.array([a1, a2, chart.z1.real]),
        np.array([b1, b2, chart.z1.imag]),
    )


def F1_F2(chart: ComplexChart, eps_domain: float = 1e-10) -> tuple[complex, complex]:
    """Defining functions of N on the domain x1 x2 != 0.

    Raises ChartDomainError when |x1 x2| < eps_domain (absolute,
    unit-scale threshold).
    """
    p = chart.x1 * chart.x2
    if abs(p) < eps_domain:
        raise ChartDomainError(f"|x1*x2| = {abs(p):.3e} below domain threshold {eps_domain:g}")
    q = cmath.sqrt(p)
    f1 = q * chart.w3 - (chart.x2 * chart.z1 * chart.w1 + chart.x1 * chart.z2 * chart.w2) / q
    ta = (chart.x2 / chart.x1) * (chart.w1 * chart.w1 + chart.x1)
    tb = (chart.x1 / chart.x2) * (chart.w2 * chart.w2 + chart.x2)
    mutation = _hooks.active()
    if mutation == "f2_term_sign":
        f2 = 0.5j * (ta + tb)
    elif mutation == "f2_inner_sign":
        ta = (chart.x2 / chart.x1) * (chart.w1 * chart.w1 - chart.x1)
        tb = (chart.x1 / chart.x2) * (chart.w2 * chart.w2 - chart.x2)
        f2 = 0.5j * (ta - tb)
    else:
        f2 = 0.5j * (ta - tb)
    return f1, f2


def on_N(
    state: PhaseState,
    params: BodyParams,
    tol: ManifoldTolerance = DEFAULT_TOLERANCE,
) -> MembershipReport:
    """Test whether the state lies on the invariant set N.

    Membership requires |F1| <= eps_f1, |F2| <= eps_f2 and |F| below
    max(eps_f1, eps_f2) relative to the natural size of F's two terms
    (F is a difference of large quantities, so an absolute comparison
    would reject states whose defining equations hold to full accuracy).
    The report also carries L (None where its radicand is negative) and
    flags |L| below 1e-8 as a symplectic degeneracy of the induced
    structure.
    """
    f1, f2 = F1_F2(state_to_chart(state), eps_domain=tol.eps_domain)
    vals = integral_FML(state, params)
    eps_f = max(tol.eps_f1, tol.eps_f2)
    core = 2.0 * vals.g - params.p2 * vals.h
    f_scale = max(1.0, core * core + params.r2**2 * vals.k)
    member = abs(f1) <= tol.eps_f1 and abs(f2) <= tol.eps_f2 and abs(vals.f) <= eps_f * f_scale
    degenerate = vals.l is not None and abs(vals.l) <= 1e-8
    return MembershipReport(
        f1=f1, f2=f2, f=vals.f, member=member, l=vals.l, symplectic_degenerate=degenerate
    )


def constraint_residuals_chart(
    chart: ComplexChart, params: BodyParams
) -> tuple[complex, complex, float]:
    """Casimir constraints rewritten in chart variables.

    Returns the left-minus-right residuals of

        z1^2 + x1 y2 = r^2,
        z2^2 + x2 y1 = r^2,
        x1 x2 + y1 y2 + 2 z1 z2 = 2 p^2,

    all zero exactly on admissible states' charts.
    """
    r2 = params.r2
    res1 = chart.z1 * chart.z1 + chart.x1 * chart.y2 - r2
    res2 = chart.z2 * chart.z2 + chart.x2 * chart.y1 - r2
    res3 = (chart.x1 * chart.x2 + chart.y1 * chart.y2 + 2.0 * chart.z1 * chart.z2).real - 2.0 * params.p2
    return res1, res2, float(res3)


def _re_f1_field(state: PhaseState) -> float:
    return F1_F2(state_to_chart(state))[0].real


def _re_f2_field(state: PhaseState) -> float:
    return F1_F2(state_to_chart(state))[1].real


def bracket_ratio(state: PhaseState, params: BodyParams, l_eps: float = 1e-8) -> float:
    """Ratio {F2, F1} / (r^2 L) at the state.

    On the invariant set N this is the global convention constant
    sigma = -1; off N it varies.  Raises ChartDomainError at x1 x2 = 0
    and DegenerateLeafError where L is undefined or |L| <= l_eps.
    """
    chart = state_to_chart(state)
    if abs(chart.x1 * chart.x2) < DEFAULT_TOLERANCE.eps_domain:
        raise ChartDomainError("x1*x2 = 0: bracket ratio undefined")
    vals = integral_FML(state, params)
    if vals.l is None:
        raise DegenerateLeafError("L undefined at this state (negative radicand)")
    if abs(vals.l) <= l_eps:
        raise DegenerateLeafError(f"|L| = {abs(vals.l):.3e} too small; symplectic degeneracy")
    br = lie_poisson_bracket(_re_f2_field, _re_f1_field, state)
    return br / (params.r2 * vals.l)


def gradient_matrix(state: PhaseState, params: BodyParams, h: float = 1e-6) -> np.ndarray:
    """2x9 Jacobian of (Re F1, Re F2) in momentum-chart coordinates.

    Central differences; used to spot-check that N is cut out
    transversally (smallest singular value bounded away from zero).
    """
    from .poisson import _fd_gradient  # same stepping as the bracket engine

    g1 = _fd_gradient(_re_f1_field, state)
    g2 = _fd_gradient(_re_f2_field, state)
    return np.vstack([g1, g2])
