"""Typed failure modes shared across the package.

Every computational dead end gets its own class so callers can tell a
precondition violation from an internal inconsistency. Nothing here ever
returns a sentinel value; symbols are +1/-1 or an exception.
"""


class DescentError(Exception):
    """Base class for all package errors."""


class NotCoprime(DescentError):
    """Symbol arguments share a factor with the modulus."""


class NonOddModulus(DescentError):
    """Jacobi modulus must be odd and positive."""


class UndefinedSymbol(DescentError):
    """Quartic/ring symbol evaluated where it has no value."""


class BadResidueClass(DescentError):
    """Argument lies outside the residue class the operation needs."""


class FactorBudgetExceeded(DescentError):
    """Factoring gave up within the configured effort bound."""


class Inert(DescentError):
    """Prime does not split in the requested quadratic ring."""


class SplitFailed(DescentError):
    """Norm-equation solver found no element of norm +-p."""


class NoPrimaryAssociate(DescentError):
    """No associate (or conjugate associate) meets the primary congruence."""


class CompositeModulus(DescentError):
    """Ring symbol modulus must have odd prime norm."""


class NotAGroup(DescentError):
    """A set that must be closed under the square-class product is not."""


class InconsistentCriteria(DescentError):
    """Local criteria produced a W-candidate set that is not a group."""


class FamilyMismatch(DescentError):
    """Classifier invoked outside the residue family it covers."""


class HypothesisViolated(DescentError):
    """Witness data does not satisfy the defining equations."""


class BudgetExceeded(DescentError):
    """Bounded search exhausted without a conclusive answer."""


class PreconditionUnmet(DescentError):
    """Operation precondition fails for these arguments."""


class NoRepresentation(DescentError):
    """No binary quadratic form of the discriminant represents the target."""
