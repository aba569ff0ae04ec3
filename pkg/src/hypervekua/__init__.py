"""Hyperbolic pseudoanalytic function theory and Klein-Gordon solution families."""

from .duplex import E1, E2, J, ONE, ZERO, Hyperbolic, IdempotentPair
from .errors import HyperVekuaError

__version__ = "0.1.0"

__all__ = ["E1", "E2", "J", "ONE", "ZERO", "Hyperbolic", "HyperVekuaError", "IdempotentPair",
           "__version__"]
