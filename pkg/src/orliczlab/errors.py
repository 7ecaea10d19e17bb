"""Exception hierarchy shared by all orliczlab modules."""


class OrliczLabError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(OrliczLabError):
    """A scenario or config fragment failed validation; message names the field."""


class SpaceMismatch(OrliczLabError):
    """A function is bound to a different measure space than the operation expects."""


class NotMeasurable(OrliczLabError):
    """A function required to be constant on partition blocks varies within a block."""


class NegativeInput(OrliczLabError, ValueError):
    """An operation restricted to nonnegative functions received negative values."""


class NonPositiveInput(OrliczLabError, ValueError):
    """An operation restricted to strictly positive functions received a non-positive value."""


class PreconditionViolated(OrliczLabError, ValueError):
    """A documented precondition on the inputs does not hold."""


class NonInvertible(OrliczLabError, ValueError):
    """Inversion target lies outside the range of a non-superlinear function."""


class NotSuperlinear(OrliczLabError, ValueError):
    """Operation requires a true (superlinear) Young function."""


class BracketFailure(OrliczLabError, RuntimeError):
    """A search bracket could not be established within the doubling budget."""


class DifferentiationFailure(OrliczLabError, ValueError):
    """Finite-difference derivatives are undefined for this function kind."""


class ConjugateMismatch(OrliczLabError, ValueError):
    """A biconjugation spot-check shows the supplied pair is not conjugate."""


class SingularLambda(OrliczLabError, ValueError):
    """Resolvent parameter is zero or too close to the operator's predicted spectrum."""


class HypothesisMissing(OrliczLabError, ValueError):
    """The supplied hypothesis flags do not license the requested classification."""


class SpectralOracleError(OrliczLabError, RuntimeError):
    """The dense eigenvalue oracle returned values incompatible with a real spectrum."""
