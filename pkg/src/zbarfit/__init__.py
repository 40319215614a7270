"""zbarfit: best-approximation of conj(z) in the Bergman space of a plane
domain, level-set tracing of the matching domains, and cross-checks against
torsional rigidity, eigenvalue, and Cauchy-transform bounds."""

from ._kernels import backend_name
from .bergman import (
    ProjectionResult,
    antiderivative,
    boundary_defect,
    corner_refined_basis,
    default_basis,
    evaluate_f,
    monomial_basis,
    orthogonality_report,
    project_zbar,
)
from .content import (
    cauchy_norm_conjecture,
    cauchy_transform,
    coarse_rigidity_bound,
    faber_krahn_chain,
    sandwich,
    st_venant_bound,
    st_venant_check,
    sweep_rows,
)
from .errors import (
    AccuracyError,
    AmbiguousMembershipError,
    BasisError,
    BranchCutError,
    ConditioningError,
    EmptyGridError,
    EmptyTraceError,
    EvaluationError,
    GeometryError,
    InequalityError,
    SolverError,
    ZbarfitError,
)
from .geometry import (
    Domain,
    annulus,
    area,
    contains,
    disk,
    ellipse,
    outer_domain,
    perimeter,
    polygon,
    rectangle,
    refined,
    scaled,
    square,
    translated,
)
from .moments import complex_moment, inner_product, moment_table, zbar_norm_sq
from .poisson import (
    bessel_j0,
    bessel_j0_first_zero,
    dirichlet_ground_eigenvalue,
    torsional_rigidity,
)
from .specfile import load_domain
from .tracer import LevelSetFamily, figure_families, roundtrip, to_domain, trace

__version__ = "0.1.0"
