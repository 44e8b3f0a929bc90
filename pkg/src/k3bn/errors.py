"""Exceptions shared across the package."""


class InputError(ValueError):
    """Malformed or dimensionally inconsistent input data."""


class PreconditionError(ValueError):
    """An operation was called outside its documented precondition."""


class InconsistentGeometryError(ValueError):
    """Numeric data that cannot arise from the geometric situation it models."""
