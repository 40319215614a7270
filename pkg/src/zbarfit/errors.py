"""Exception hierarchy.

Two broad families, mirrored by the CLI exit codes: validation problems
(bad inputs, malformed domains/bases) and numerical failures (quadrature
that never settles, solvers that hit their iteration caps, branch-cut
trouble).
"""


class ZbarfitError(Exception):
    """Base class for all package errors."""


# -- validation -------------------------------------------------------------

class GeometryError(ZbarfitError):
    """Malformed boundary data: open loops, bad orientation, crossings."""


class AmbiguousMembershipError(GeometryError):
    """Point-membership query too close to the boundary to call."""


class EmptyGridError(GeometryError):
    """Interior sampling produced no cells (spacing too coarse)."""


class BasisError(ZbarfitError):
    """Invalid basis element (pole inside the domain, bad exponent...)."""


class EmptyTraceError(ZbarfitError):
    """Level-set trace found no crossings in the window."""


# -- numerical --------------------------------------------------------------

class AccuracyError(ZbarfitError):
    """Adaptive quadrature disagreement above the acceptance threshold."""


class ConditioningError(ZbarfitError):
    """Normal-equation solve failed even with the ridge fallback."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class BranchCutError(ZbarfitError):
    """A log-term branch cut makes the requested evaluation ill-defined."""


class SolverError(ZbarfitError):
    """Iterative linear solver exceeded its cap without converging."""


class EvaluationError(ZbarfitError):
    """Pointwise evaluation at a singular location (e.g. on a pole)."""


class InequalityError(ZbarfitError):
    """A proved inequality came out violated beyond the error estimates."""
