"""First integrals and the Lie-Poisson bracket engine.

The flow conserves three independent integrals,

    H = w1^2 + w2^2 + w3^2/2 - (alpha1 + beta2)
    K = (w1^2 - w2^2 + alpha1 - beta2)^2 + (2 w1 w2 + alpha2 + beta1)^2
    G = (wa^2 + wb^2)/4 + w3*wg/2 - b^2 alpha1 - a^2 beta2

with the auxiliary contractions of the angular momentum M = (2w1, 2w2, w3)

    wa = M . alpha,   wb = M . beta,   wg = M . (alpha x beta),

and the derived combinations

    F = (2G - p^2 H)^2 - r^4 K
    M = (2G - p^2 H) / r^4
    L = sqrt(2 p^2 M^2 + 2 H M + 1)     (undefined where the radicand < 0).

The bracket is the Lie-Poisson structure on (M, alpha, beta):

    {M_i, M_j} = -eps_ijk M_k,  {M_i, alpha_j} = -eps_ijk alpha_k,
    {M_i, beta_j} = -eps_ijk beta_k,  all other basic brackets zero,

with evolution udot = {u, H}.  This sign convention is fixed because it
reproduces exactly the Euler-Poisson right-hand side certified by the
conservation tests; the only observable alternative flips the constant
ratio {F2, F1}/(r^2 L) computed in the manifold module (measured: -1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .statespace import BodyParams, PhaseState

__all__ = [
    "IntegralValues",
    "MomentumChart",
    "ScalarField",
    "integral_H",
    "integral_K",
    "integral_G",
    "aux_omegas",
    "integral_FML",
    "lie_poisson_bracket",
    "hamiltonian_field",
    "field_H",
    "field_K",
    "field_G",
    "field_F",
    "field_M",
    "field_L",
    "to_momentum_chart",
    "from_momentum_chart",
]

_EPS3 = np.zeros((3, 3, 3))
_EPS3[0, 1, 2] = _EPS3[1, 2, 0] = _EPS3[2, 0, 1] = 1.0
_EPS3[0, 2, 1] = _EPS3[2, 1, 0] = _EPS3[1, 0, 2] = -1.0

# Central-difference step for fields without an analytic gradient.
_FD_REL_STEP = 1e-6


@dataclass(frozen=True)
class IntegralValues:
    """Values of the six integrals at one state; l is None where the
    radicand of L is negative (the state is far from the invariant set)."""

    h: float
    k: float
    g: float
    f: float
    m: float
    l: Optional[float]


@dataclass(frozen=True)
class MomentumChart:
    """Angular-momentum coordinates u = (M, alpha, beta), M = (2w1, 2w2, w3)."""

    M_vec: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.M_vec, self.alpha, self.beta])


def to_momentum_chart(state: PhaseState) -> MomentumChart:
    w = state.omega
    return MomentumChart(np.array([2 * w[0], 2 * w[1], w[2]]), state.alpha.copy(), state.beta.copy())


def from_momentum_chart(chart: MomentumChart) -> PhaseState:
    M = chart.M_vec
    return PhaseState(np.array([0.5 * M[0], 0.5 * M[1], M[2]]), chart.alpha, chart.beta)


def _u_of_state(state: PhaseState) -> np.ndarray:
    w = state.omega
    return np.concatenate([[2 * w[0], 2 * w[1], w[2]], state.alpha, state.beta])


def _state_of_u(u: np.ndarray) -> PhaseState:
    return PhaseState(np.array([0.5 * u[0], 0.5 * u[1], u[2]]), u[3:6], u[6:9])


def integral_H(state: PhaseState) -> float:
    """Energy integral."""
    w, al, be = state.omega, state.alpha, state.beta
    return float(w[0] ** 2 + w[1] ** 2 + 0.5 * w[2] ** 2 - (al[0] + be[1]))


def integral_K(state: PhaseState) -> float:
    """Kovalevskaya-type integral, a sum of two squares (K >= 0)."""
    w, al, be = state.omega, state.alpha, state.beta
    z1 = w[0] ** 2 - w[1] ** 2 + al[0] - be[1]
    z2 = 2 * w[0] * w[1] + al[1] + be[0]
    return float(z1 * z1 + z2 * z2)


def aux_omegas(state: PhaseState) -> tuple[float, float, float]:
    """Contractions (wa, wb, wg) of M with alpha, beta and alpha x beta."""
    w, al, be = state.omega, state.alpha, state.beta
    wa = 2 * w[0] * al[0] + 2 * w[1] * al[1] + w[2] * al[2]
    wb = 2 * w[0] * be[0] + 2 * w[1] * be[1] + w[2] * be[2]
    wg = (
        2 * w[0] * (al[1] * be[2] - al[2] * be[1])
        + 2 * w[1] * (al[2] * be[0] - al[0] * be[2])
        + w[2] * (al[0] * be[1] - al[1] * be[0])
    )
    return float(wa), float(wb), float(wg)


def integral_G(state: PhaseState, params: BodyParams) -> float:
    """Third integral completing the involutive family with H and K."""
    wa, wb, wg = aux_omegas(state)
    w3 = state.omega[2]
    return float(
        0.25 * (wa * wa + wb * wb)
        + 0.5 * w3 * wg
        - params.b**2 * state.alpha[0]
        - params.a**2 * state.beta[1]
    )


def integral_FML(state: PhaseState, params: BodyParams) -> IntegralValues:
    """All six integrals at once.

    F and M are polynomial in (H, K, G); L is the nonnegative square root
    of 2 p^2 M^2 + 2 H M + 1 and is reported as None where the radicand
    is negative (a plain statement of fact, not an error).
    """
    h = integral_H(state)
    k = integral_K(state)
    g = integral_G(state, params)
    r4 = params.r2**2
    core = 2.0 * g - params.p2 * h
    f = core * core - r4 * k
    m = core / r4
    rad = 2.0 * params.p2 * m * m + 2.0 * h * m + 1.0
    l = math.sqrt(rad) if rad >= 0.0 else None
    return IntegralValues(h=h, k=k, g=g, f=f, m=m, l=l)


# ---------------------------------------------------------------------------
# Scalar fields and the bracket
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScalarField:
    """Scalar function on phase space, optionally with analytic gradient.

    The gradient is with respect to the momentum-chart coordinates
    u = (M1, M2, M3, alpha1..3, beta1..3) and has shape (9,).  Fields
    without a gradient fall back to central differences with step
    1e-6 * max(1, |u_i|).
    """

    func: Callable[[PhaseState], float]
    grad: Optional[Callable[[PhaseState], np.ndarray]] = None
    name: str = ""

    def __call__(self, state: PhaseState) -> float:
        return self.func(state)


FieldLike = Union[ScalarField, Callable[[PhaseState], float]]


def _fd_gradient(func: Callable[[PhaseState], float], state: PhaseState) -> np.ndarray:
    u0 = _u_of_state(state)
    grad = np.empty(9)
    for i in range(9):
        h = _FD_REL_STEP * max(1.0, abs(u0[i]))
        up = u0.copy()
        um = u0.copy()
        up[i] += h
        um[i] -= h
        grad[i] = (func(_state_of_u(up)) - func(_state_of_u(um))) / (2.0 * h)
    return grad


def _gradient(field: FieldLike, state: PhaseState) -> np.ndarray:
    if isinstance(field, ScalarField) and field.grad is not None:
        return np.asarray(field.grad(state), dtype=float)
    func = field.func if isinstance(field, ScalarField) else field
    return _fd_gradient(func, state)


def _structure_tensor(u: np.ndarray) -> np.ndarray:
    """9x9 antisymmetric tensor T with {u_i, u_j} = T_ij."""
    M, al, be = u[0:3], u[3:6], u[6:9]
    T = np.zeros((9, 9))
    TMM = -np.einsum("ijk,k->ij", _EPS3, M)
    TMa = -np.einsum("ijk,k->ij", _EPS3, al)
    TMb = -np.einsum("ijk,k->ij", _EPS3, be)
    T[0:3, 0:3] = TMM
    T[0:3, 3:6] = TMa
    T[3:6, 0:3] = -TMa.T
    T[0:3, 6:9] = TMb
    T[6:9, 0:3] = -TMb.T
    return T


def lie_poisson_bracket(fn_f: FieldLike, fn_g: FieldLike, state: PhaseState) -> float:
    """Evaluate {f, g} at the state.

    Raises ValueError on non-finite gradients (e.g. a field evaluated
    outside its domain).
    """
    gf = _gradient(fn_f, state)
    gg = _gradient(fn_g, state)
    if not (np.all(np.isfinite(gf)) and np.all(np.isfinite(gg))):
        raise ValueError("non-finite gradient in Poisson bracket")
    T = _structure_tensor(_u_of_state(state))
    return float(gf @ T @ gg)


def hamiltonian_field(state: PhaseState) -> PhaseState:
    """Tangent udot = {u, H} mapped back to (omega, alpha, beta).

    Goes through the structure tensor, independently of the hand-derived
    right-hand side in the dynamics module; the two must agree.
    """
    u = _u_of_state(state)
    udot = _structure_tensor(u) @ _grad_H(state)
    return _state_of_u(udot)


# ---------------------------------------------------------------------------
# Built-in fields with analytic gradients (u-coordinates)
# ---------------------------------------------------------------------------

def _grad_H(state: PhaseState) -> np.ndarray:
    u = _u_of_state(state)
    g = np.zeros(9)
    g[0] = 0.5 * u[0]
    g[1] = 0.5 * u[1]
    g[2] = u[2]
    g[3] = -1.0
    g[7] = -1.0
    return g


def _grad_K(state: PhaseState) -> np.ndarray:
    u = _u_of_state(state)
    M1, M2 = u[0], u[1]
    z1 = 0.25 * (M1 * M1 - M2 * M2) + u[3] - u[7]
    z2 = 0.5 * M1 * M2 + u[4] + u[6]
    g = np.zeros(9)
    g[0] = z1 * M1 + z2 * M2
    g[1] = -z1 * M2 + z2 * M1
    g[3] = 2 * z1
    g[4] = 2 * z2
    g[6] = 2 * z2
    g[7] = -2 * z1
    return g


def _grad_G(state: PhaseState, params: BodyParams) -> np.ndarray:
    u = _u_of_state(state)
    M, al, be = u[0:3], u[3:6], u[6:9]
    wa = M @ al
    wb = M @ be
    axb = np.cross(al, be)
    wg = M @ axb
    gM = 0.5 * (wa * al + wb * be) + 0.5 * M[2] * axb + 0.5 * wg * np.array([0.0, 0.0, 1.0])
    ga = 0.5 * wa * M + 0.5 * M[2] * np.cross(be, M) - params.b**2 * np.array([1.0, 0.0, 0.0])
    gb = 0.5 * wb * M + 0.5 * M[2] * np.cross(M, al) - params.a**2 * np.array([0.0, 1.0, 0.0])
    return np.concatenate([gM, ga, gb])


def field_H() -> ScalarField:
    return ScalarField(func=integral_H, grad=_grad_H, name="H")


def field_K() -> ScalarField:
    return ScalarField(func=integral_K, grad=_grad_K, name="K")


def field_G(params: BodyParams) -> ScalarField:
    return ScalarField(
        func=lambda s: integral_G(s, params),
        grad=lambda s: _grad_G(s, params),
        name="G",
    )


def _core_and_grad(state: PhaseState, params: BodyParams) -> tuple[float, np.ndarray]:
    core = 2.0 * integral_G(state, params) - params.p2 * integral_H(state)
    gcore = 2.0 * _grad_G(state, params) - params.p2 * _grad_H(state)
    return core, gcore


def field_F(params: BodyParams) -> ScalarField:
    r4 = params.r2**2

    def func(s: PhaseState) -> float:
        v = integral_FML(s, params)
        return v.f

    def grad(s: PhaseState) -> np.ndarray:
        core, gcore = _core_and_grad(s, params)
        return 2.0 * core * gcore - r4 * _grad_K(s)

    return ScalarField(func=func, grad=grad, name="F")


def field_M(params: BodyParams) -> ScalarField:
    r4 = params.r2**2

    def func(s: PhaseState) -> float:
        return integral_FML(s, params).m

    def grad(s: PhaseState) -> np.ndarray:
        _, gcore = _core_and_grad(s, params)
        return gcore / r4

    return ScalarField(func=func, grad=grad, name="M")


def field_L(params: BodyParams) -> ScalarField:
    r4 = params.r2**2

    def func(s: PhaseState) -> float:
        v = integral_FML(s, params)
        return v.l if v.l is not None else math.nan

    def grad(s: PhaseState) -> np.ndarray:
        h = integral_H(s)
        core, gcore = _core_and_grad(s, params)
        m = core / r4
        gm = gcore / r4
        rad = 2.0 * params.p2 * m * m + 2.0 * h * m + 1.0
        if rad <= 0.0:
            return np.full(9, math.nan)
        l = math.sqrt(rad)
        return (2.0 * params.p2 * m * gm + m * _grad_H(s) + h * gm) / l

    return ScalarField(func=func, grad=grad, name="L")
