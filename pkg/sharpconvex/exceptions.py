class SharpConvexError(Exception):
    pass


class DomainError(SharpConvexError, ValueError):
    pass


class ArgumentError(SharpConvexError, ValueError):
    pass


class InternalError(SharpConvexError):
    pass


class EvaluationError(SharpConvexError):
    _MESSAGE = "Integrand is not finite at node %r (value %r)"

    def __init__(self, node, value):
        super(EvaluationError, self).__init__(self._MESSAGE % (node, value))
        self.node = node
        self.value = value


class ConvergenceError(SharpConvexError):
    _MESSAGE = "No convergence within budget: estimate %r, error %.3e"

    def __init__(self, estimate, error):
        super(ConvergenceError, self).__init__(
            self._MESSAGE % (estimate, error)
        )
        self.estimate = estimate
        self.error = error
