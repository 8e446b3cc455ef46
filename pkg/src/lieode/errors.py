"""Exception types shared across the pipeline stages."""


class LieOdeError(Exception):
    """Base class for recoverable pipeline failures."""


class IntegrationFailed(LieOdeError):
    pass


class NotSeparable(LieOdeError):
    pass


class NotAutonomous(LieOdeError):
    pass


class DivisionByZeroLocus(LieOdeError):
    pass


class TrivialSymmetry(LieOdeError):
    pass


class EmptyDomain(LieOdeError):
    pass


class AllSamplesSingular(LieOdeError):
    pass
