"""Shared error type: every failure carries a stable machine-readable code."""

from __future__ import annotations


class SmotKitError(Exception):
    """Domain error with a stable ``code`` (e.g. "EMPTY_GT", "SYNTAX").

    The code identifies the failure class; ``message`` carries context such
    as line numbers or field names.
    """

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message


#: Codes that indicate an environment or I/O problem rather than bad domain
#: input. The CLI maps these to exit code 2, everything else to exit code 1.
IO_ERROR_CODES = frozenset({"IO", "MISSING_FILE"})
