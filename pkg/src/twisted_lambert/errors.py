"""Exception hierarchy shared by every module of the package."""


class LambertError(Exception):
    """Base class for all errors raised by :mod:`twisted_lambert`."""


class ParameterError(LambertError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class PoleError(ParameterError):
    """Evaluation requested at (or numerically indistinguishable from) a pole."""


class AccuracyLossError(LambertError, ArithmeticError):
    """The requested tolerance could not be reached at the working precision."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class InvalidCharacterError(ParameterError):
    """A value table does not define a Dirichlet character."""


class CoefficientFileError(LambertError):
    """A coefficient file could not be parsed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class IntegrityError(LambertError):
    """Ingested data violates a declared invariant or a sanity screen."""


class InsufficientCoefficientsError(LambertError):
    """A truncated series needs more coefficients than are available."""

    def __init__(self, message, required):
        super().__init__(message)
        self.required = required


class UnsupportedLevelError(LambertError):
    """The Fricke partner of a level Q > 1 form was not supplied."""


class CertificationError(LambertError):
    """A zero failed its residual or stability certification."""


class SimplicityError(CertificationError):
    """L'(rho) is too small to separate the zero from a multiple one."""


class HypothesisError(ParameterError):
    """The configuration does not satisfy the hypotheses of the requested result."""


class ConfigError(LambertError):
    """A run configuration is invalid; carries every problem found."""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))
