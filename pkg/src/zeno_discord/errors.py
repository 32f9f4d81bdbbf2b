"""Exception and warning types raised across the package."""


class ZenoDiscordError(Exception):
    """Base class for all package errors."""


class NonHermitianInput(ZenoDiscordError, ValueError):
    pass


class IndeterminateEntropy(ZenoDiscordError, ArithmeticError):
    """An eigenvalue fell below the round-off floor, so the entropy is undefined."""


class DomainError(ZenoDiscordError, ValueError):
    pass


class NegativeRate(DomainError):
    """The effective decay rate is negative, so the survival probability would exceed one."""


class QuadratureFailure(ZenoDiscordError, ArithmeticError):
    pass


class EtaSingular(ZenoDiscordError, ZeroDivisionError):
    """The closed-form rate has a removable singularity at eta = 1/2."""


class TruncationWarning(RuntimeWarning):
    pass
