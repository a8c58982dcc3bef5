"""Bigraphical nets: parse, match and reduce binets from Python."""

from ._binet import (
    Binet,
    ConflictDetected,
    InvalidBinet,
    ParseError,
    RhoCompileError,
    RuleSet,
    Trace,
    active_pairs,
    compile_rho,
    normalize_rho,
    reduce,
)

__all__ = [
    "Binet",
    "ConflictDetected",
    "InvalidBinet",
    "ParseError",
    "RhoCompileError",
    "RuleSet",
    "Trace",
    "active_pairs",
    "compile_rho",
    "normalize_rho",
    "reduce",
]
