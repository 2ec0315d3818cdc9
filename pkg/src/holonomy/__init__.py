"""Quantum sl2 at odd roots of unity, holonomy R-matrices and colored tangle invariants."""
from __future__ import annotations

from .arith import KERNEL_BACKEND, get_precision, set_precision
from .errors import (BranchError, ConsistencyError, DecompositionError, DomainError,
                     GenericityError, HolonomyError, LiftError, ParseError, PoleError)

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND", "get_precision", "set_precision", "__version__",
    "HolonomyError", "DomainError", "PoleError", "DecompositionError", "BranchError",
    "GenericityError", "LiftError", "ConsistencyError", "ParseError",
]
