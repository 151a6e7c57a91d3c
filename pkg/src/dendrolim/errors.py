"""Exception hierarchy.

Validation problems (bad input, violated preconditions) derive from
:class:`ValidationError`; failures of a numerical construction derive from
:class:`NumericalError`. The CLI maps them to exit codes 2 and 3.
"""


class DendroError(Exception):
    """Base class for all library errors."""


class ValidationError(DendroError, ValueError):
    pass


class NumericalError(DendroError, ArithmeticError):
    pass


# tree_core
class NotConnected(ValidationError):
    pass


class HasCycle(ValidationError):
    pass


class BadEdgeIndex(ValidationError):
    pass


class TrivialTree(ValidationError):
    pass


class EnumerationTooLarge(ValidationError):
    pass


# real_tree / dendron
class InvalidPoint(ValidationError):
    pass


class BadEdgeLength(ValidationError):
    pass


class WeightsNotNormalized(ValidationError):
    pass


class BranchWithZeroMass(ValidationError):
    def __init__(self, message, attachment=None):
        super().__init__(message)
        self.attachment = attachment


class NotAtomic(ValidationError):
    pass


# reconstruct
class TooManyAtoms(ValidationError):
    pass


class NotSpanned(ValidationError):
    pass


class NotATreeMetric(NumericalError):
    pass


class NegativeGromovProduct(NumericalError):
    pass


# discretize
class DiameterTooLarge(ValidationError):
    pass


# convergence
class OrderMismatch(ValidationError):
    pass


class UnsupportedRegion(ValidationError):
    pass
