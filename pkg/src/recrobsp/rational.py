"""Exact rational arithmetic backend.

Every quantity in this package (costs, deviations, budgets, LP tableaus) is
an exact rational.  The hot loops are dominated by rational add/compare, so
we use gmpy2's GMP-backed ``mpq`` when it is importable and fall back to the
stdlib ``fractions.Fraction`` otherwise.  Both types hash and compare
interchangeably and print "p/q" / "p" identically, so the choice is invisible
except for speed (mpq is roughly 10x faster; see benchmarks/bench_rational.py).

Set RECROBSP_RATIONAL=fractions (or =gmpy2) to force a backend.
"""

from __future__ import annotations

import os
from fractions import Fraction

_forced = os.environ.get("RECROBSP_RATIONAL", "").strip().lower()

if _forced in ("", "gmpy2"):
    try:
        from gmpy2 import mpq as Rat

        BACKEND = "gmpy2"
    except ImportError:
        if _forced == "gmpy2":
            raise
        Rat = Fraction
        BACKEND = "fractions"
elif _forced == "fractions":
    Rat = Fraction
    BACKEND = "fractions"
else:
    raise RuntimeError(f"unknown RECROBSP_RATIONAL backend {_forced!r}")

ZERO = Rat(0)
ONE = Rat(1)


def rat(value) -> "Rat":
    """Coerce ints, Fractions, mpqs and 'p/q' strings to the active backend.

    Floats are rejected: they would smuggle binary rounding into a toolkit
    whose whole point is exact certification.
    """
    if isinstance(value, float):
        raise TypeError(f"refusing float {value!r}; pass an int, rational, or 'p/q' string")
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            return Rat(int(num), int(den))
        return Rat(int(text))
    return Rat(value)


def rat_str(value) -> str:
    """Canonical string form: 'p' for integers, 'p/q' otherwise (q > 0)."""
    value = rat(value)
    return str(value)
