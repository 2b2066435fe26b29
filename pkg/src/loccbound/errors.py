"""Exception hierarchy.

Every error raised on purpose by the toolkit derives from :class:`LoccError`.
The two intermediate classes decide the CLI exit code: input problems map to
:class:`ValidationError` (exit 1), numerical failures to
:class:`NumericalError` (exit 2).
"""


class LoccError(Exception):
    """Base class for toolkit errors."""


class ValidationError(LoccError, ValueError):
    """Input violates a documented precondition."""


class NumericalError(LoccError, ArithmeticError):
    """A numerical procedure failed to produce a trustworthy answer."""


class SizeError(ValidationError):
    pass


class LayoutError(ValidationError):
    pass


class ShapeError(ValidationError):
    pass


class SymmetryError(ValidationError):
    pass


class NormalizationError(ValidationError):
    pass


class DistributionError(ValidationError):
    pass


class ParseError(ValidationError):
    """Document is not a well-formed ensemble / protocol / encoding file."""


class POVMError(ValidationError):
    pass


class ArityError(ValidationError):
    pass


class PurityError(ValidationError):
    pass


class UnitarityError(ValidationError):
    pass


class DomainError(ValidationError):
    pass


class ProtocolError(ValidationError):
    pass


class ConvergenceError(NumericalError):
    pass


class RootFindingError(NumericalError):
    pass
