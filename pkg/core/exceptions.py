"""
Core Exceptions
---------------
Custom exception classes and the centralized command error handler.

Purpose:
- One hierarchy for every failure the toolkit can report
- Map failures to command exit codes (0 success, 1 expectation, 2 usage/validation)
- Log errors appropriately
"""
import logging

logger = logging.getLogger(__name__)

EXIT_EXPECTATION = 1
EXIT_USAGE = 2


def command_exception_handler(exc):
    """
    Translate an exception raised inside a command into a payload + exit code.

    Payload format:
    {
        "error": "Error type",
        "message": "Human-readable message",
        "details": {...},
        "exit_code": 2
    }
    """
    if isinstance(exc, ExpectationFailed):
        exit_code = EXIT_EXPECTATION
    elif isinstance(exc, TdLabError):
        exit_code = EXIT_USAGE
    else:
        # Handle anything we did not raise ourselves
        logger.error(f"Unhandled exception: {exc}", exc_info=True)
        exit_code = EXIT_USAGE

    payload = {
        'error': exc.__class__.__name__,
        'message': str(exc),
        'exit_code': exit_code,
    }

    details = getattr(exc, 'details', None)
    if details:
        payload['details'] = details

    return payload, exit_code


# Custom Exception Classes

class TdLabError(Exception):
    """
    Base exception for every domain error.
    """

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details or {}


class SpecError(TdLabError):
    """
    Problem-file errors.
    """
    pass


class SpecParseError(SpecError):
    """
    JSON syntax error or schema-shape mismatch.
    """
    pass


class SpecValidationError(SpecError):
    """
    A model invariant is violated; names the offending field and entry.
    """

    def __init__(self, message, field=None, index=None):
        super().__init__(message, details={'field': field, 'index': index})
        self.field = field
        self.index = index


class RankDeficientError(SpecError):
    """
    Feature matrix does not have full column rank.
    """
    pass


class ReducibleChainError(TdLabError):
    """
    Markov chain has a state that cannot reach another.
    """

    def __init__(self, source, target):
        super().__init__(
            f"chain is reducible: state {target} is unreachable from state {source}",
            details={'source': source, 'target': target},
        )
        self.source = source
        self.target = target


class LinalgError(TdLabError):
    """
    Dense linear-algebra failures.
    """
    pass


class SingularMatrixError(LinalgError):
    pass


class EigenConvergenceError(LinalgError):
    pass


class NotHurwitzError(LinalgError):
    """
    Matrix has an eigenvalue with nonnegative real part.
    """
    pass


class PreconditionError(TdLabError):
    """
    Operation called outside its documented domain.
    """
    pass


class ContractionPreconditionError(PreconditionError):
    """
    γⁿ‖Π‖∞ < 1 does not hold.
    """
    pass


class SamplingError(TdLabError):
    pass


class InvariantViolation(TdLabError):
    """
    A report or bound invariant failed. Always a bug.
    """
    pass


class ExpectationFailed(TdLabError):
    """
    A run did not meet --expect-converge or a repro check failed.
    """
    pass
