"""Exception hierarchy shared by all modules."""
from __future__ import annotations


class HolonomyError(Exception):
    """Base class for errors raised by this package."""


class DomainError(HolonomyError, ValueError):
    pass


class PoleError(HolonomyError, ZeroDivisionError):
    """A denominator vanishes at the requested root of unity."""


class DecompositionError(HolonomyError):
    """Gauss decomposition failed (g22 = 0 or point outside the big cell)."""


class BranchError(HolonomyError):
    """A fractional power or square root landed on or near a branch cut."""


class GenericityError(HolonomyError):
    """A central character or coloring is not generic enough to proceed."""


class LiftError(HolonomyError):
    pass


class ConsistencyError(HolonomyError):
    """A linear solve or closing condition has no solution."""


class ParseError(HolonomyError, ValueError):
    pass
