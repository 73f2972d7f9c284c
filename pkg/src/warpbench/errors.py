"""Exception types shared across the package."""


class ParameterError(ValueError):
    """An argument violates a documented precondition."""


class ContractViolation(RuntimeError):
    """An internal consistency guarantee was broken (indicates a bug)."""
