"""Exception hierarchy for pmcomb."""


class PmcombError(Exception):
    """Base class for all errors raised by this package."""


class InvalidDimensionError(PmcombError, ValueError):
    pass


class NumericError(PmcombError, ArithmeticError):
    """Non-finite input to a numerical routine."""


class AccuracyError(PmcombError, ArithmeticError):
    """An internal accuracy gate (symplecticity, symmetry) was violated."""


class InvalidSpecError(PmcombError, ValueError):
    """A comb or tone specification violates its invariants."""


class DegenerateStateError(PmcombError, ArithmeticError):
    """The Q-block of a covariance matrix is singular."""


class ConventionError(PmcombError, ArithmeticError):
    """Extracted V or U is not symmetric; usually a quadrature ordering mix-up."""


class TransformationSingularError(PmcombError, ArithmeticError):
    """A + B Z is singular in a Mobius update."""


class InvalidErrorMatrixError(PmcombError, ValueError):
    pass


class ConfigError(PmcombError, ValueError):
    """Configuration failed validation.

    ``errors`` holds ``(field_path, message)`` pairs, one per problem found.
    """

    def __init__(self, errors):
        self.errors = list(errors)
        lines = [f"{path}: {msg}" if path else msg for path, msg in self.errors]
        super().__init__("invalid configuration:\n  " + "\n  ".join(lines))
