"""
Centralized error handling utilities.
Defines the exception hierarchy and maps failures to exit codes and one-line diagnostics.
"""

import logging
import traceback
from typing import Optional, Tuple

import pydantic

from .types import ExitCode, StatusMessage, StatusType


class EcError(Exception):
    """Base class for all library errors."""

    exit_code = ExitCode.COMPUTATION


class ValidationError(EcError):
    """Malformed input: bad files, bad weights, invalid structures."""

    exit_code = ExitCode.VALIDATION


class UnsupportedInputError(EcError):
    """Well-formed input outside the supported scope."""


class ComputationError(EcError):
    """A computation could not finish within its enumeration or truncation bound."""


class FieldMismatchError(EcError):
    """Scalars or matrices over different fields were combined."""


class InternalConsistencyError(EcError):
    """A checked invariant failed on a computed result."""


class ProjectiveHomomorphismError(EcError):
    """A linear map is not a projective monoid homomorphism; carries the witness basis pair."""

    def __init__(self, message: str, witness: Tuple[int, int]):
        super().__init__(message)
        self.witness = witness


def validation_error_from_pydantic(error: pydantic.ValidationError, source: str) -> ValidationError:
    """
    Converts a pydantic validation error into a single-line ValidationError.

    Args:
        error: The pydantic error raised while loading a model.
        source: Name of the file or argument being validated.

    Returns:
        ValidationError naming the first offending field path.
    """
    first = error.errors()[0]
    location = ".".join(str(part) for part in first.get("loc", ())) or "<root>"
    return ValidationError(f"{source}: field '{location}': {first.get('msg', 'invalid value')}")


class CommandErrorHandler:
    """Centralized error handling for command functions."""

    def __init__(self, logger: Optional[logging.Logger] = None):
        self.logger = logger or logging.getLogger()

    def handle_command_exception(self, exception: Exception, context: str) -> StatusMessage:
        """
        Standardized exception handling for commands.

        Args:
            exception: The exception that occurred
            context: Context description for where the error occurred

        Returns:
            StatusMessage with the exit code and a single-line diagnostic
        """
        if isinstance(exception, pydantic.ValidationError):
            exception = validation_error_from_pydantic(exception, context)

        message = " ".join(str(exception).split()) or type(exception).__name__
        if isinstance(exception, EcError):
            exit_code = exception.exit_code
            label = "invalid input" if exit_code == ExitCode.VALIDATION else "error"
        else:
            exit_code = ExitCode.COMPUTATION
            label = "internal error"

        self.logger.error(f"  -> ERROR in {context}: {message}")
        self.logger.debug(f"  -> Traceback: {traceback.format_exc()}")

        status = StatusType.VALIDATION_FAILED if exit_code == ExitCode.VALIDATION else StatusType.ERROR
        return StatusMessage(status=status, message=f"{context}: {label}: {message}", exit_code=exit_code)
