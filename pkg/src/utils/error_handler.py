from ..utils.logger import logger


class DCDistError(Exception):
    """Base class for errors raised by dcdist."""


class DomainError(DCDistError):
    """Evaluation outside a domain or an unsupported input shape."""


class EvaluationError(DCDistError):
    """A function returned a non-finite value."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class ResolutionTooCoarseError(DCDistError):
    """The certificate resolution violates n >= 6 or |f_n(0) - f(0)| < 1/10."""

    def __init__(self, message, inequality):
        super().__init__(message)
        self.inequality = inequality


class CoverViolationError(DCDistError):
    """No cover function agrees with c*_n at a point of U."""


class InternalConsistencyError(DCDistError):
    """Two evaluation routes that must agree did not."""


class PreconditionError(DCDistError):
    """An identity was requested outside its hypotheses."""


class ConfigError(DCDistError):
    """Malformed command line, configuration or input document."""


def handle_error(error):
    if isinstance(error, ConfigError):
        logger.error(f"Usage error: {error}")
        return 2
    if isinstance(error, DCDistError):
        logger.error(f"An error occurred: {error}")
        return 1
    logger.exception(f"Unexpected error: {error}")
    return 1
