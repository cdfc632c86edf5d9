"""Exact interpreter and analyser for a probabilistic guarded-command language.

Exact quantities come back as ``fractions.Fraction``; rational arguments may be
given as ``int``, ``Fraction`` or strings such as ``"3/4"``.
"""

from ._core import (
    CodecError,
    DeltaNonPositiveError,
    Error,
    NotOrdinaryError,
    ParseError,
    ProbabilityRangeError,
    Program,
    ReservedVarClashError,
    cantor_pair,
    cantor_unpair,
    expected_partial,
    explore,
    g_decode,
    lexp,
    nat_to_rat,
    parse,
    rat_to_nat,
    reduce,
    refute_uexp,
    run,
    sample,
    termination_partial,
)

__all__ = [
    "CodecError",
    "DeltaNonPositiveError",
    "Error",
    "NotOrdinaryError",
    "ParseError",
    "ProbabilityRangeError",
    "Program",
    "ReservedVarClashError",
    "cantor_pair",
    "cantor_unpair",
    "expected_partial",
    "explore",
    "g_decode",
    "lexp",
    "nat_to_rat",
    "parse",
    "rat_to_nat",
    "reduce",
    "refute_uexp",
    "run",
    "sample",
    "termination_partial",
]
