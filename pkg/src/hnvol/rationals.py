"""Exact rational helpers shared across the package.

Everything numeric in this package is a `fractions.Fraction` unless a
function explicitly says otherwise.  These helpers coerce user-facing
inputs (ints, strings like "3/4" or "-2", Fractions) and render rationals
in the canonical "p/q" wire format.
"""

from __future__ import annotations

import decimal
from fractions import Fraction

Rat = Fraction


def rat(value: object) -> Fraction:
    """Coerce an int, "p/q" string, or Fraction to an exact Fraction.

    Floats are rejected on purpose: silently converting 0.1 to
    3602879701896397/36028797018963968 hides bugs that exactness is
    supposed to catch.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"expected a rational number, got bool {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a valid rational literal: {value!r}") from exc
    raise ValueError(f"expected a rational number, got {type(value).__name__} {value!r}")


def format_rat(value: Fraction) -> str:
    """Render a Fraction as "p/q" (always with denominator, sign on p)."""
    return f"{value.numerator}/{value.denominator}"


def parse_rat(text: str) -> Fraction:
    """Parse the "p/q" wire format (also accepts a bare integer string)."""
    if not isinstance(text, str):
        raise ValueError(f"expected a rational string, got {type(text).__name__}")
    return rat(text)


def decimal_str(value: Fraction, digits: int = 20) -> str:
    """Approximate decimal rendering with `digits` significant digits.

    Deterministic (fixed decimal context, ROUND_HALF_EVEN); used only for
    human-facing "approx" output, never fed back into computations.
    """
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        ctx.rounding = decimal.ROUND_HALF_EVEN
        d = decimal.Decimal(value.numerator) / decimal.Decimal(value.denominator)
    return str(d)
