"""Exception types with a fixed mapping to CLI exit codes."""

from __future__ import annotations


class TuranforgeError(Exception):
    exit_code = 1


class CapabilityError(TuranforgeError, ValueError):
    """The requested method cannot handle an input this large."""

    exit_code = 4


class BudgetError(TuranforgeError):
    exit_code = 5


class ParseError(TuranforgeError, ValueError):
    exit_code = 3

    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)
