"""User-friendly error messages with actionable solutions."""

from __future__ import annotations

from enum import Enum
from typing import Any, Dict, List, Optional, Sequence

from .error_handling import (
    BudgetExceededError,
    ConfigError,
    InfiniteDelayError,
    InvalidArgumentError,
    TooLargeInstanceError,
    UnsupportedError,
)


class ErrorCategory(Enum):
    CONFIG = "config"
    VALIDATION = "validation"
    BUDGET = "budget"
    MODEL = "model"
    SYSTEM = "system"


class UserFriendlyError:
    def __init__(
        self,
        category: ErrorCategory,
        title: str,
        message: str,
        solutions: Sequence[str],
        original_error: Optional[str] = None,
    ):
        self.category = category
        self.title = title
        self.message = message
        self.solutions: List[str] = list(solutions)
        self.original_error = original_error

    def to_dict(self) -> Dict[str, Any]:
        return {
            "error": True,
            "category": self.category.value,
            "title": self.title,
            "message": self.message,
            "solutions": self.solutions,
            "original_error": self.original_error,
        }

    def format_for_user(self) -> str:
        """Plain-text diagnostic for standard error."""
        output = f"error: {self.title}\n{self.message}"
        if self.solutions:
            output += "\nHow to fix:"
            for i, solution in enumerate(self.solutions, 1):
                output += f"\n  {i}. {solution}"
        return output


class ErrorMessageGenerator:
    """Generate user-facing diagnostics from lgfnoma exceptions."""

    @staticmethod
    def from_exception(error: BaseException) -> UserFriendlyError:
        text = str(error)

        if isinstance(error, TooLargeInstanceError):
            return UserFriendlyError(
                category=ErrorCategory.BUDGET,
                title="Enumeration Too Large",
                message=text,
                solutions=[
                    "Use smaller M, C or L for the exhaustive check",
                    "Raise LGF_MAX_ENUMERATION if the run time is acceptable",
                ],
                original_error=text,
            )

        if isinstance(error, BudgetExceededError):
            return UserFriendlyError(
                category=ErrorCategory.BUDGET,
                title="Simulation Budget Exceeded",
                message=text,
                solutions=[
                    "Lower --slots or shorten the sweep",
                    "Raise LGF_MAX_DEVICE_SLOTS if the run time is acceptable",
                ],
                original_error=text,
            )

        if isinstance(error, ConfigError):
            return UserFriendlyError(
                category=ErrorCategory.CONFIG,
                title="Invalid Configuration",
                message=text,
                solutions=[
                    "Check key names and units in [system], [experiment] and [[schemes]]",
                    "Pass --config with an explicit path or unset LGF_CONFIG",
                ],
                original_error=text,
            )

        if isinstance(error, UnsupportedError):
            return UserFriendlyError(
                category=ErrorCategory.MODEL,
                title="Unsupported Parameters",
                message=text,
                solutions=["Use at least 2 subchannels (B_T/B >= 2)"],
                original_error=text,
            )

        if isinstance(error, InfiniteDelayError):
            return UserFriendlyError(
                category=ErrorCategory.MODEL,
                title="Infinite Access Delay",
                message=text,
                solutions=["Use p_E > 0 and a load with nonzero access probability"],
                original_error=text,
            )

        if isinstance(error, (InvalidArgumentError, ValueError)):
            return UserFriendlyError(
                category=ErrorCategory.VALIDATION,
                title="Invalid Argument",
                message=text,
                solutions=["Check the value ranges shown in --help"],
                original_error=text,
            )

        return UserFriendlyError(
            category=ErrorCategory.SYSTEM,
            title="Unexpected Error",
            message=f"{type(error).__name__}: {text}",
            solutions=["Re-run with --log-level DEBUG for details"],
            original_error=text,
        )


def format_error_for_cli(error: BaseException) -> str:
    return ErrorMessageGenerator.from_exception(error).format_for_user()
