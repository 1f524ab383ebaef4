"""Exception hierarchy shared by the library and the CLI."""


class LMGError(Exception):
    """Base class for all errors raised by lmgmetric."""


class DomainError(LMGError, ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class BracketError(LMGError, ValueError):
    """A root-finding bracket does not enclose a sign change."""


class SingularPointError(DomainError):
    """The query sits exactly on the phase boundary, where the limit metric jumps."""


class ResourceError(LMGError, MemoryError):
    """A dense construction was requested for a system that is too large."""


class UsageError(LMGError, ValueError):
    """A scan or CLI request is malformed (bad ranges, odd N list, ...)."""
