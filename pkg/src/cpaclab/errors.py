"""Shared exception types.

Everything raised on purpose by this library derives from CpacError, so
callers (and the CLI) can separate domain failures from genuine bugs.
"""


class CpacError(Exception):
    """Base class for all library errors."""


class EmptySampleError(CpacError, ValueError):
    """An operation that is undefined on the empty sample received one."""


class BudgetExceededError(CpacError, RuntimeError):
    """An enumeration or simulation would exceed its configured budget."""


class NotYetEnumeratedError(CpacError, RuntimeError):
    """A dovetailed enumeration has not produced the requested element yet.

    This is the honest "insufficient budget" signal for semi-decidable
    questions; it never silently degrades into a boolean.
    """


class UndecidableRangeError(CpacError, TypeError):
    """Range membership was requested from a function that cannot decide it."""


class MalformedProgramError(CpacError, ValueError):
    """A machine program failed validation (bad operand or jump target)."""


class ReachError(CpacError, ValueError):
    """The configured enumeration reach cannot certify the requested value."""
