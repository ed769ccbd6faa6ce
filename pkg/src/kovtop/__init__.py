"""Numerical laboratory for the Kovalevskaya top in a double force field.

The library integrates the Euler-Poisson equations of a rigid body with
inertia tensor diag{2, 2, 1} in the potential built from two constant
orthogonal fields, verifies the first-integral structure through a
Lie-Poisson bracket engine, restricts the motion to the invariant set N,
separates the variables there, reconstructs phase states from the
separated coordinates, evaluates oscillation periods in closed elliptic
form, and classifies the (m, l) plane of leaf constants.
"""

__version__ = "0.1.0"

from .statespace import (  # noqa: F401
    BodyParams,
    PhaseState,
    NormalizationReport,
    make_params,
    normalize_fields,
    potential,
    casimir_residuals,
    random_admissible_state,
)
from .poisson import (  # noqa: F401
    IntegralValues,
    integral_H,
    integral_K,
    integral_G,
    integral_FML,
    aux_omegas,
    lie_poisson_bracket,
    hamiltonian_field,
)
from .dynamics import (  # noqa: F401
    IntegratorConfig,
    Trajectory,
    euler_poisson_rhs,
    integrate,
    time_derivative_identities,
)
from .manifold import (  # noqa: F401
    ComplexChart,
    ManifoldTolerance,
    MembershipReport,
    state_to_chart,
    chart_to_state,
    F1_F2,
    on_N,
    constraint_residuals_chart,
    bracket_ratio,
)
from .separation import (  # noqa: F401
    SeparationConstants,
    SeparatedPoint,
    phi,
    phi_roots,
    psi,
    energy_on_leaf,
    s_from_state,
    relation6_residual,
    admissible_intervals,
    separated_rhs,
    reconstruct,
    integrate_separated,
    crosscheck,
    random_leaf_point,
)
from .elliptic import (  # noqa: F401
    QuarticSpec,
    quartic_spec,
    carlson_rf,
    period,
    period_ode,
    s_of_t,
)
from .bifurcation import (  # noqa: F401
    SeparatingSet,
    separating_lines,
    classify,
    diagram_grid,
)
