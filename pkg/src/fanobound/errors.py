"""Exception hierarchy shared by all fanobound modules."""


class FanoboundError(Exception):
    """Base class for every error raised by the package."""


class BasisError(FanoboundError):
    """Divisor classes from different bases were combined."""


class InputError(FanoboundError):
    """Degenerate or out-of-domain input."""


class SolveError(FanoboundError):
    """A linear system had no unique solution."""


class FormatError(FanoboundError):
    """A data file or text input could not be parsed."""


class ValidationError(FanoboundError):
    """Loaded data violates a catalog invariant."""


class FactError(FanoboundError):
    """A certificate needs an external fact that is not in the table."""


class CertificateError(FanoboundError):
    """A certificate step or contradiction does not check out."""


class SubstError(FanoboundError):
    """A substitution is not defined on some variable it is applied to."""


class NameClash(FanoboundError, NameError):
    """A new variable name is already used by the presentation."""


class ShapeError(FanoboundError):
    """A presentation is not in triangular solved form."""
