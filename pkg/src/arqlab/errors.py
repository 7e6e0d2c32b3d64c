"""Exception types shared across the package."""


class ContractError(ValueError):
    """An argument violates a documented precondition."""


class EnumerationInfeasible(RuntimeError):
    """A multidimensional constellation is too large to enumerate exactly.

    Callers should fall back to sampled (Monte-Carlo) evaluation.
    """


class SpecValidationError(ValueError):
    """An experiment specification is invalid; the message lists every violation."""
