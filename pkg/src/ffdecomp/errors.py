"""Exception types shared across the toolkit."""


class ValidationError(ValueError):
    """An input violates a documented precondition."""


class SpecMismatchError(ValidationError):
    """Elements of different field specs were mixed in one operation."""


class ConstantInputError(ValidationError):
    """A decomposition entry point received a constant function."""


class SizeLimitError(RuntimeError):
    """An enumeration would exceed the configured size limit."""
