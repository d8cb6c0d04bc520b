"""Exception hierarchy shared by all modules."""


class FlucnakError(Exception):
    pass


class ParameterError(FlucnakError, ValueError):
    """An input lies outside the domain of the requested quantity."""


class MomentDivergenceError(ParameterError):
    pass


class AsymptoteUndefinedError(ParameterError):
    pass


class BelowMinimumError(ParameterError):
    pass


class ContractError(FlucnakError, ValueError):
    """A caller-supplied object broke its contract (e.g. a non-monotone CDF)."""


class AccuracyError(FlucnakError, ArithmeticError):
    """A numerical method could not reach the requested accuracy.

    ``estimate`` and ``error`` carry the best value found so callers can
    decide whether to use it anyway.
    """

    def __init__(self, message, estimate=float("nan"), error=float("inf")):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
