"""Exact laws of the one-dimensional simple random walk, with oracles and a seeded simulator."""

from .errors import DomainRestriction, WalklabError
from .laws import FAIR, LawTable, WalkParams
from .ruin import RuinResult, RuinSpec, solve_ruin

__all__ = [
    "DomainRestriction",
    "FAIR",
    "LawTable",
    "RuinResult",
    "RuinSpec",
    "WalkParams",
    "WalklabError",
    "solve_ruin",
]
