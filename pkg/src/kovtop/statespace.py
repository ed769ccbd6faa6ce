"""Phase-space primitives: body parameters, states, field normalization.

The rigid body has principal moments of inertia diag{2, 2, 1} about the
fixed point and sits in the potential U = -(e1 . alpha) - (e2 . beta),
where e1, e2 are the equatorial principal axes and alpha, beta are two
constant spatial vectors.  Everything is kept in body-frame components,
so a phase point is the triple (omega, alpha, beta).

Rotating the equatorial axes by an angle theta, together with the same
rotation mixing the pair (alpha, beta), leaves the potential invariant.
Choosing theta from tan(2*theta) = 2(alpha.beta)/(alpha^2 - beta^2)
makes the transformed fields orthogonal, so the rest of the library
assumes the normal form

    |alpha| = a,   |beta| = b,   alpha . beta = 0,   a > b > 0,

with the shorthand p2 = a^2 + b^2 and r2 = a^2 - b^2.  Only the general
case a > b > 0 is modeled: b = 0 collapses to the classical one-field
Kovalevskaya top and is rejected.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Vec3",
    "BodyParams",
    "PhaseState",
    "NormalizationReport",
    "DegenerateFieldsError",
    "FieldOrderError",
    "CASIMIR_RTOL",
    "make_params",
    "potential",
    "casimir_residuals",
    "is_admissible",
    "rotate_field_plane",
    "normalize_fields",
    "random_admissible_state",
]

Vec3 = np.ndarray

# Relative tolerance deciding whether a state counts as admissible; one
# order above typical integrator drift, far below physical significance.
CASIMIR_RTOL = 1e-8


class DegenerateFieldsError(ValueError):
    """Transformed field pair left the modeled regime (b = 0 or a = b)."""


class FieldOrderError(ValueError):
    """Transformed fields came out with |alpha| < |beta|; swap the inputs."""


def _vec3(v, name: str = "vector") -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"{name} must have 3 components, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite, got {arr}")
    return arr


@dataclass(frozen=True)
class BodyParams:
    """Field magnitudes a > b > 0 and the derived constants.

    p2 = a^2 + b^2 and r2 = a^2 - b^2 appear throughout the first
    integrals and the separation formulas, so they are stored once.
    """

    a: float
    b: float
    p2: float
    r2: float

    @property
    def r(self) -> float:
        """Positive root of r2."""
        return math.sqrt(self.r2)


def make_params(a: float, b: float) -> BodyParams:
    """Validate the field magnitudes and precompute p2, r2.

    Raises ValueError unless a > b > 0 with both finite.
    """
    a = float(a)
    b = float(b)
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError(f"field magnitudes must be finite, got a={a}, b={b}")
    if b <= 0.0:
        raise ValueError(f"need b > 0 (b = 0 is the classical one-field top), got b={b}")
    if a <= b:
        raise ValueError(f"only the general case a > b is modeled, got a={a}, b={b}")
    return BodyParams(a=a, b=b, p2=a * a + b * b, r2=a * a - b * b)


@dataclass(frozen=True)
class PhaseState:
    """Body-frame phase point (omega, alpha, beta).

    The same container is used for tangent vectors returned by the
    equations of motion; admissibility (Casimir constraints) is checked
    on demand, not at construction.
    """

    omega: Vec3
    alpha: Vec3
    beta: Vec3

    def __post_init__(self):
        object.__setattr__(self, "omega", _vec3(self.omega, "omega"))
        object.__setattr__(self, "alpha", _vec3(self.alpha, "alpha"))
        object.__setattr__(self, "beta", _vec3(self.beta, "beta"))

    def as_array(self) -> np.ndarray:
        """Flatten to (omega, alpha, beta) in a length-9 vector."""
        return np.concatenate([self.omega, self.alpha, self.beta])

    @classmethod
    def from_array(cls, y) -> "PhaseState":
        y = np.asarray(y, dtype=float)
        if y.shape != (9,):
            raise ValueError(f"state vector must have 9 components, got {y.shape}")
        return cls(y[0:3].copy(), y[3:6].copy(), y[6:9].copy())


@dataclass(frozen=True)
class NormalizationReport:
    """Outcome of the field-orthogonalization rotation.

    theta is the rotation angle in (-pi/4, pi/4]; a and b are the
    post-rotation field magnitudes with a > b.
    """

    theta: float
    state: PhaseState
    a: float
    b: float


def potential(state: PhaseState) -> float:
    """Potential energy -(e1 . alpha) - (e2 . beta) = -alpha1 - beta2."""
    return -state.alpha[0] - state.beta[1]


def casimir_residuals(state: PhaseState, params: BodyParams) -> tuple[float, float, float]:
    """Residuals (|alpha|^2 - a^2, |beta|^2 - b^2, alpha . beta).

    All three are conserved by the flow; they vanish on admissible states.
    """
    al, be = state.alpha, state.beta
    return (
        float(al @ al - params.a**2),
        float(be @ be - params.b**2),
        float(al @ be),
    )


def is_admissible(state: PhaseState, params: BodyParams, rtol: float = CASIMIR_RTOL) -> bool:
    """Whether the Casimir residuals vanish to relative tolerance rtol."""
    ra, rb, rab = casimir_residuals(state, params)
    a2, b2 = params.a**2, params.b**2
    return abs(ra) <= rtol * a2 and abs(rb) <= rtol * b2 and abs(rab) <= rtol * params.a * params.b


def rotate_field_plane(omega: Vec3, alpha: Vec3, beta: Vec3, theta: float) -> tuple[Vec3, Vec3, Vec3]:
    """Apply the potential-preserving rotation by theta.

    The pair (alpha, beta) is mixed by the plane rotation, and all three
    vectors are then re-expressed in the equatorial frame rotated about
    the third axis by the same angle.  The value -alpha1 - beta2 and the
    sum alpha^2 + beta^2 are invariant for every theta.
    """
    omega = _vec3(omega, "omega")
    alpha = _vec3(alpha, "alpha")
    beta = _vec3(beta, "beta")
    c, s = math.cos(theta), math.sin(theta)
    alpha_mix = c * alpha + s * beta
    beta_mix = -s * alpha + c * beta

    def reframe(v: np.ndarray) -> np.ndarray:
        return np.array([c * v[0] + s * v[1], -s * v[0] + c * v[1], v[2]])

    return reframe(omega), reframe(alpha_mix), reframe(beta_mix)


def normalize_fields(omega: Vec3, alpha_raw: Vec3, beta_raw: Vec3) -> NormalizationReport:
    """Rotate the raw fields into the orthogonal normal form.

    The angle solves tan(2*theta) = 2(alpha.beta)/(alpha^2 - beta^2) in
    the branch (-pi/4, pi/4], which keeps the magnitude ordering of the
    inputs and makes repeated application a no-op (theta = 0 the second
    time).  When alpha^2 = beta^2 with nonzero dot product, theta = pi/4.

    Raises DegenerateFieldsError when the transformed pair has b = 0
    (raw fields linearly dependent: the classical Kovalevskaya top in a
    single field) or a = b, and FieldOrderError when it has a < b (the
    caller should swap the raw fields).
    """
    omega = _vec3(omega, "omega")
    alpha_raw = _vec3(alpha_raw, "alpha")
    beta_raw = _vec3(beta_raw, "beta")
    diff = float(alpha_raw @ alpha_raw - beta_raw @ beta_raw)
    dot2 = 2.0 * float(alpha_raw @ beta_raw)
    scale = float(alpha_raw @ alpha_raw + beta_raw @ beta_raw)
    if scale == 0.0:
        raise DegenerateFieldsError("both field vectors are zero")

    if abs(diff) <= 1e-15 * scale:
        theta = math.pi / 4 if abs(dot2) > 1e-15 * scale else 0.0
    else:
        theta = 0.5 * math.atan(dot2 / diff)

    om, al, be = rotate_field_plane(omega, alpha_raw, beta_raw, theta)
    a = float(np.linalg.norm(al))
    b = float(np.linalg.norm(be))
    if b <= 1e-12 * a:
        raise DegenerateFieldsError(
            "transformed beta vanishes: raw fields are linearly dependent, which is "
            "the classical Kovalevskaya top in a single field (not modeled)"
        )
    if a < b:
        raise FieldOrderError(
            f"transformed magnitudes ordered a < b ({a:.6g} < {b:.6g}); "
            "swap the raw alpha and beta and normalize again"
        )
    if abs(a - b) <= 1e-12 * a:
        raise DegenerateFieldsError(f"transformed magnitudes coincide (a = b = {a:.6g}); not modeled")
    return NormalizationReport(theta=theta, state=PhaseState(om, al, be), a=a, b=b)


def random_admissible_state(
    params: BodyParams, rng: np.random.Generator, omega_scale: float = 1.0
) -> PhaseState:
    """Draw a random state satisfying the Casimir constraints exactly.

    alpha and beta are placed along a random orthonormal pair scaled to
    a and b; omega is an isotropic Gaussian of the given scale.
    """
    while True:
        u = rng.standard_normal(3)
        nu = np.linalg.norm(u)
        if nu > 1e-6:
            u /= nu
            break
    while True:
        v = rng.standard_normal(3)
        v -= (v @ u) * u
        nv = np.linalg.norm(v)
        if nv > 1e-6:
            v /= nv
            break
    omega = omega_scale * rng.standard_normal(3)
    return PhaseState(omega, params.a * u, params.b * v)
