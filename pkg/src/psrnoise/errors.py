"""Exception hierarchy shared by the simulation modules."""


class DomainError(ValueError):
    """A numerical input falls outside the domain an operation supports."""


class ParameterDomainError(DomainError):
    pass


class LinearizationError(DomainError):
    """Input lies outside the small-signal regime the model is linearized in."""


class InfeasibleTargetError(DomainError):
    pass


class BracketExhaustedError(DomainError):
    pass


class SamplingError(DomainError):
    pass
