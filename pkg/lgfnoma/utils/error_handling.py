"""Exception hierarchy and error-handling helpers for lgfnoma."""

from __future__ import annotations

import functools
import logging
from enum import Enum
from typing import Any, Callable, TypeVar, cast

logger = logging.getLogger(__name__)

F = TypeVar("F", bound=Callable[..., Any])

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BUDGET = 3


class ErrorSeverity(Enum):
    """Error severity levels."""

    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"
    CRITICAL = "critical"


class LgfError(Exception):
    """Base class for every error raised by lgfnoma."""


class InvalidArgumentError(LgfError, ValueError):
    """An argument is outside the domain of the operation."""


class OutOfCellError(InvalidArgumentError):
    """A distance lies outside the cell disk [0, D]."""


class InvalidChannelError(InvalidArgumentError):
    """A channel power gain is not strictly positive."""


class UnsupportedError(LgfError):
    """The requested formula is undefined for these parameters."""


class InfiniteDelayError(LgfError, ArithmeticError):
    """Access probability is zero, so the expected delay diverges."""


class ConfigError(LgfError):
    """Configuration could not be loaded or failed validation."""


class BudgetExceededError(LgfError):
    """A run would exceed its configured computation budget."""


class TooLargeInstanceError(BudgetExceededError):
    """Exhaustive enumeration exceeds the assignment budget."""


def exit_code_for(error: BaseException) -> int:
    """Map an exception to a CLI exit code (only 2 and 3 are used for failures)."""
    if isinstance(error, BudgetExceededError):
        return EXIT_BUDGET
    return EXIT_CONFIG


def handle_errors(
    component: str,
    severity: ErrorSeverity = ErrorSeverity.MEDIUM,
) -> Callable[[F], F]:
    """Decorator that logs failures with their component name and re-raises."""

    def decorator(func: F) -> F:
        @functools.wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            try:
                return func(*args, **kwargs)
            except LgfError as e:
                if severity in (ErrorSeverity.HIGH, ErrorSeverity.CRITICAL):
                    logger.error(f"Error in {component}: {e}")
                else:
                    logger.warning(f"Error in {component}: {e}")
                raise
            except Exception as e:
                logger.error(f"Unexpected {type(e).__name__} in {component}: {e}")
                raise

        return cast(F, wrapper)

    return decorator
