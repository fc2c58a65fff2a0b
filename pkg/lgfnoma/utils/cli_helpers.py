"""Terminal formatting for command output."""

import sys
from typing import Any, Iterable, Sequence


class CLIFormatter:
    """ANSI formatting that degrades to plain text when not on a terminal."""

    RESET = "\033[0m"
    BOLD = "\033[1m"

    GREEN = "\033[32m"
    YELLOW = "\033[33m"
    BLUE = "\033[34m"

    @classmethod
    def enabled(cls) -> bool:
        return sys.stdout.isatty()

    @classmethod
    def colorize(cls, text: str, color: str) -> str:
        """Add color to text."""
        if not cls.enabled():
            return text
        return f"{color}{text}{cls.RESET}"

    @classmethod
    def success(cls, text: str) -> str:
        return cls.colorize(text, cls.GREEN)

    @classmethod
    def warning(cls, text: str) -> str:
        return cls.colorize(f"warning: {text}", cls.YELLOW)

    @classmethod
    def header(cls, text: str) -> str:
        return cls.colorize(f"\n{text}", cls.BOLD + cls.BLUE)


def format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def format_table(headers: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """Left-aligned fixed-width table."""
    cells = [[format_value(v) for v in row] for row in rows]
    widths = [len(h) for h in headers]
    for row in cells:
        for i, text in enumerate(row):
            widths[i] = max(widths[i], len(text))
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths))]
    lines.append("  ".join("-" * w for w in widths))
    for row in cells:
        lines.append("  ".join(t.ljust(w) for t, w in zip(row, widths)))
    return "\n".join(lines)
