class IfsError(ValueError):
    """Base class for every error raised by ifsx."""


class DimensionMismatch(IfsError):
    pass


class ValidationError(IfsError):
    pass


class NonContractingError(IfsError):
    pass


class BudgetExceeded(IfsError):
    pass


class PreconditionError(IfsError):
    pass


class NotSSCError(PreconditionError):
    pass


class UnsupportedWitnessShape(IfsError):
    pass


class IncompatibleInputs(IfsError):
    pass


class UnsupportedDimension(IfsError):
    pass
