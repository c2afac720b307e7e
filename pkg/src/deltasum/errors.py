"""Exception taxonomy.

Domain-validation errors (bad input values) and computational errors
(budget, overflow, non-convergence) are kept in separate branches so the
CLI can map them to distinct exit codes.
"""


class DeltasumError(Exception):
    """Base class for all toolkit errors."""


class DomainError(DeltasumError):
    """Invalid argument values (maps to CLI exit code 2)."""


class ComputationError(DeltasumError):
    """Resource or numerical failure (maps to CLI exit code 3)."""


class NotInvertible(DomainError):
    pass


class NotPrime(DomainError):
    pass


class NotUnit(DomainError):
    pass


class PrincipalCharacter(DomainError):
    pass


class ModulusMismatch(DomainError):
    pass


class SharedFactor(DomainError):
    pass


class ParameterInconsistency(DomainError):
    pass


class InfeasiblePoint(DomainError):
    pass


class ShapeMismatch(DomainError):
    pass


class Infeasible(DomainError):
    pass


class Unbounded(DomainError):
    pass


class OutOfRange(ComputationError):
    pass


class BudgetExceeded(ComputationError):
    pass


class QuadratureNonConvergence(ComputationError):
    pass
