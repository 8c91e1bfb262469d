"""Exception types shared across the toolkit."""


class CompressLawError(Exception):
    """Base class for every error raised by this package."""


class DomainError(CompressLawError, ValueError):
    """An input falls outside the mathematical domain of an operation."""


class RegimeError(DomainError):
    """A recovery threshold lies in the wrong regime for the requested quantity."""


class SingularDesignError(CompressLawError, ValueError):
    """The regression design matrix is rank deficient or too ill conditioned."""


class DataFormatError(CompressLawError, ValueError):
    """A CSV or JSON document violates the expected schema."""


class InfeasibleBudgetError(DomainError):
    """The parameter budget demands a compression ratio at or above the cap."""

    def __init__(self, message: str, ratio: float):
        super().__init__(message)
        self.ratio = ratio
