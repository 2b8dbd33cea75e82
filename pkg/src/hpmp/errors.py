"""Exception hierarchy shared by the solver, the oracles and the CLI."""


class HpmpError(Exception):
    """Base class for every error raised by this package."""


class InvalidInstanceError(HpmpError, ValueError):
    pass


class InstanceParseError(InvalidInstanceError):
    """Malformed instance file. ``lineno`` is 1-based (0 when unknown)."""

    def __init__(self, message, lineno=0):
        self.lineno = lineno
        if lineno:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class NoPerfectMatchingError(HpmpError):
    """The graph admits no perfect matching."""


class InfeasibleProblemError(HpmpError, ValueError):
    """No set of p disjoint cycles (length >= 3) can cover the vertices."""


class AlgorithmInapplicableError(HpmpError):
    """The split branch ran out of components with at least six vertices."""


class OracleLimitError(HpmpError, ValueError):
    """Instance too large for a brute-force oracle."""


class InternalInvariantError(HpmpError, AssertionError):
    """A postcondition that should hold by construction was violated."""
