class InfluenceScopeError(Exception):
    """
        Base class of the errors raised by influencescope.
    """


class GraphFormatError(InfluenceScopeError, ValueError):
    """
        A graph or update stream file is malformed.
    """
    def __init__(self, message, line_no=None):
        if line_no is not None:
            message = f'line {line_no}: {message}'
        super(GraphFormatError, self).__init__(message)
        self.line_no = line_no


class WeightRangeError(InfluenceScopeError, ValueError):
    """
        An edge weight or an update would leave the valid range of the model.
    """


class BudgetExceededError(InfluenceScopeError, RuntimeError):
    """
        The exact oracle would enumerate more configurations than allowed.
    """


class SamplingExhaustedError(InfluenceScopeError, RuntimeError):
    """
        Sampling stopped (sampler exhausted or hard cap reached) before the target was met.
    """
    def __init__(self, message, num_samples=0, num_positive=0):
        super(SamplingExhaustedError, self).__init__(message)
        self.num_samples = num_samples
        self.num_positive = num_positive


class InvariantViolation(InfluenceScopeError, AssertionError):
    """
        An internal invariant of a sketch, index or tracker does not hold.
    """
