"""Rational conversion and rigorous comparisons against exponentials.

Word products, orientations and endpoints are exact rationals.  The only
transcendental quantities in the closeness conditions are e^{+-eps}; these
are enclosed between two rationals computed at 320 bits and widened by
2^-280 relative, far above the evaluation error.  A comparison that falls
inside the enclosure is reported as failing, so checks never overclaim.
"""

from __future__ import annotations

import math
from decimal import Decimal
from fractions import Fraction
from functools import lru_cache

import mpmath

_CTX = mpmath.MPContext()
_CTX.prec = 320
_SLACK = Fraction(1, 2**280)


def to_fraction(x) -> Fraction:
    """Exact rational value of an int, float, Fraction, Decimal or numeric string.

    Strings may be decimal ("0.3") or rational ("1/3"); floats convert to
    their exact binary value.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, (int, Decimal)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r}")
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if hasattr(x, "man_exp"):
        return mpf_to_fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def mpf_to_fraction(v) -> Fraction:
    man, exp = v.man_exp
    man = int(man)
    exp = int(exp)
    if exp >= 0:
        return Fraction(man * (1 << exp))
    return Fraction(man, 1 << -exp)


def _mpf(q: Fraction):
    return _CTX.mpf(q.numerator) / q.denominator


@lru_cache(maxsize=4096)
def exp_bounds(x: Fraction) -> tuple[Fraction, Fraction]:
    """Rational (lower, upper) with lower < e^x < upper."""
    if x == 0:
        return Fraction(1), Fraction(1)
    v = mpf_to_fraction(_CTX.exp(_mpf(x)))
    return v * (1 - _SLACK), v * (1 + _SLACK)


def strictly_inside_exp(q: Fraction, eps: Fraction) -> bool:
    """Decide e^{-eps} < q < e^{eps} for rational q > 0, never overclaiming."""
    if q <= 0 or eps <= 0:
        return False
    if q == 1:
        return True
    lo, _ = exp_bounds(eps)
    _, hi_neg = exp_bounds(-eps)
    return hi_neg < q < lo


def abs_log(q: Fraction) -> float:
    """|log q| in floating point; used for margins and diagnostics only."""
    return abs(math.log(q.numerator) - math.log(q.denominator))


def round_up(x) -> Fraction:
    """A rational not below the high-precision value x (mpf or Fraction)."""
    if isinstance(x, Fraction):
        return x
    return mpf_to_fraction(x) * (1 + _SLACK)


def mp(x):
    """Convert a Fraction/float/int to a high-precision mpf in the private context."""
    return _mpf(to_fraction(x))


def mp_exp(x):
    return _CTX.exp(x)


def mp_abs(x):
    return abs(x)
