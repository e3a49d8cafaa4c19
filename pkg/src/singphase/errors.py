"""Exception hierarchy shared by all modules."""


class SingPhaseError(Exception):
    """Base class for errors raised by this package."""


class DomainError(SingPhaseError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class PoleError(DomainError):
    """Gamma evaluated at (or numerically indistinguishable from) a pole."""


class InvalidSpec(SingPhaseError, ValueError):
    pass


class JetExhausted(SingPhaseError, IndexError):
    """A derivative beyond the amplitude's stored jet was requested."""


class DivergentIntegral(SingPhaseError, ValueError):
    pass


class IllConditionedFit(SingPhaseError, ArithmeticError):
    pass


class OrderTooHigh(SingPhaseError, ValueError):
    pass


class AccelerationStalled(SingPhaseError, ArithmeticError):
    pass


class InsufficientPoints(SingPhaseError, ValueError):
    pass
