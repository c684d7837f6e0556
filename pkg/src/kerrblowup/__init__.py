"""Blow-up of TE waves in Kerr slabs with complex linear and nonlinear permittivity.

Simulates the nondimensional Helmholtz equation
``phi'' + [r(x) + s(x)|phi|^2] phi = 0``, detects finite-coordinate blow-up,
and evaluates the comparison bounds that guarantee it.
"""

from .analytic import SecSolutionParams, amplitude_A, sec_solution, sec_solution_derivative, z_star
from .errors import (
    ConfigError,
    DegenerateInitialDataError,
    DomainError,
    InapplicableBoundError,
    InvalidInputError,
    KerrBlowupError,
    PoleDomainError,
)
from .glassey import (
    BoundResult,
    GlasseyData,
    HypothesisReport,
    alpha_beta,
    check_hypotheses,
    comparison_time,
    gamma_closed_q,
    gamma_quadrature,
    glassey_data,
    h_antiderivative,
    h_eval,
    l_star_physical,
)
from .integrator import (
    BlowupReport,
    InitialConditions,
    IntegratorConfig,
    Trajectory,
    estimate_blowup_point,
    helmholtz_rhs,
    integrate,
    monitor_identities,
)
from .slab import PhysicalParams, ProfileSpec, SlabProfile, eval_r, eval_s, nondimensionalize, sup_bounds
from .special import gamma

__version__ = "0.1.0"
