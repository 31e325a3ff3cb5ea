"""Exception hierarchy shared by the library and the CLI.

Each class carries the process exit code the CLI maps it to.
"""


class UniratesError(Exception):
    exit_code = 1


class InputError(UniratesError, ValueError):
    """Malformed input: out-of-range ids, bad files, violated preconditions."""

    exit_code = 2


class ProtocolError(UniratesError):
    """A learning protocol was fed data it is not defined on (e.g. unrealizable)."""

    exit_code = 3


class LimitError(UniratesError):
    """A search exceeded one of the hard combinatorial caps."""

    exit_code = 4


class ConstructionError(InputError):
    """A lower-bound or witness construction found no valid witness."""
