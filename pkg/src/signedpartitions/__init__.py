"""Moebius- and Liouville-signed partition numbers: exact tables, saddle points,
two-term asymptotics and circle-method diagnostics."""

from .numtheory import (
    LIOUVILLE,
    MOBIUS,
    MOBIUS_SQUARED,
    ONE,
    FactorSieve,
    SignFunction,
    build_sieve,
    indicator,
    parse_sign_function,
)

__version__ = "0.1.0"

__all__ = [
    "LIOUVILLE",
    "MOBIUS",
    "MOBIUS_SQUARED",
    "ONE",
    "FactorSieve",
    "SignFunction",
    "build_sieve",
    "indicator",
    "parse_sign_function",
]
