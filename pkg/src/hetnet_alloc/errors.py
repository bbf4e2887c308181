"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    """An argument lies outside the domain of the operation."""


class ConfigError(ValueError):
    """A scenario, profile or experiment configuration cannot be honoured."""


class TrainError(RuntimeError):
    """A classifier could not be fitted to its dataset."""


class ConvergenceError(TrainError):
    """Iterative training hit its iteration cap.

    The last iterate and the log-likelihood trace are kept on the exception
    so callers can still inspect (or use) the partially trained model.
    """

    def __init__(self, message, model=None, trace=None):
        super().__init__(message)
        self.model = model
        self.trace = trace


class BuildError(ValueError):
    """A MILP program cannot be built from the given inputs."""


class ConsistencyError(RuntimeError):
    """Solver values disagree with a direct recomputation."""


class SearchSpaceTooLarge(ValueError):
    """Exhaustive enumeration refused; carries the size estimate."""

    def __init__(self, message, size):
        super().__init__(message)
        self.size = size
