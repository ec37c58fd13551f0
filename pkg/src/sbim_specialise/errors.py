"""Exception hierarchy shared by every module of the package."""


class SpecialiseError(Exception):
    """Base class for all errors raised by this package."""


class FieldMismatchError(SpecialiseError, TypeError):
    """Two scalars from different quadratic fields were combined."""


class UnsupportedFieldError(SpecialiseError, ValueError):
    """A realisation needs numbers outside the configured field."""


class RealisationError(SpecialiseError, ValueError):
    """Roots, coroots or generator matrices violate a realisation invariant.

    ``pair`` names the offending generator pair when a braid order fails.
    """

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class CapExceeded(SpecialiseError, RuntimeError):
    """An iteration cap was hit; the outcome is undetermined."""


class NotInOrbitError(SpecialiseError, KeyError):
    pass


class SupportError(SpecialiseError, ArithmeticError):
    """A module has generalized eigenvalues away from the orbit points."""


class ConfigError(SpecialiseError, ValueError):
    """Aggregated job configuration problems (one message per line)."""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("\n".join(self.problems))
