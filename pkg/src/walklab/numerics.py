"""Exact integer/rational primitives.

``fractions.Fraction`` is the exact rational carrier throughout the package:
it keeps numerator and denominator in lowest terms with a positive
denominator, and Python integers never overflow.  Floating values appear
only at the rendering edge (:func:`to_decimal`) or in the explicitly
asymptotic helpers below.
"""

from __future__ import annotations

import math
from decimal import Decimal
from fractions import Fraction

from .errors import DomainRange, PartsMismatch

HALF = Fraction(1, 2)
DEFAULT_PRECISION = 6

__all__ = [
    "HALF",
    "DEFAULT_PRECISION",
    "as_fraction",
    "as_prob",
    "binomial",
    "multinomial",
    "generalized_binomial",
    "central_binomial_asymptotic",
    "log_central_binomial_asymptotic",
    "central_binomial_ratio",
    "render_exact",
    "round_half_even",
    "to_decimal",
]


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"a/b"`` strings to a Fraction.

    Floats are refused: a binary float is rarely the rational the caller
    meant (0.45 is not 45/100).
    """
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise ValueError(f"decimal literal {value!r} rejected; use the a/b form")
        return Fraction(text)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def as_prob(value) -> Fraction:
    p = as_fraction(value)
    if not 0 <= p <= 1:
        raise DomainRange(f"probability {p} outside [0, 1]")
    return p


def binomial(n: int, k: int) -> int:
    """C(n, k), with 0 outside 0 <= k <= n."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def multinomial(n: int, parts) -> int:
    parts = list(parts)
    if any(p < 0 for p in parts):
        raise PartsMismatch(f"negative part in {parts}")
    if sum(parts) != n:
        raise PartsMismatch(f"parts {parts} sum to {sum(parts)}, expected {n}")
    # product of binomials keeps intermediates small
    out, remaining = 1, n
    for part in parts:
        out *= math.comb(remaining, part)
        remaining -= part
    return out


def generalized_binomial(alpha: Fraction, n: int) -> Fraction:
    """alpha*(alpha-1)*...*(alpha-n+1)/n! for rational alpha."""
    alpha = Fraction(alpha)
    num = Fraction(1)
    for j in range(n):
        num *= alpha - j
    return num / math.factorial(n)


def log_central_binomial_asymptotic(n: int) -> float:
    """log(4**n / sqrt(pi*n))."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return n * math.log(4.0) - 0.5 * math.log(math.pi * n)


def central_binomial_asymptotic(n: int) -> float:
    """4**n / sqrt(pi*n) as a float.

    Raises OverflowError once the value leaves double range (n > 511);
    use :func:`log_central_binomial_asymptotic` or
    :func:`central_binomial_ratio` there.
    """
    return math.exp(log_central_binomial_asymptotic(n))


def central_binomial_ratio(n: int) -> float:
    """exact C(2n, n) divided by its asymptotic form, computed in log space."""
    return math.exp(math.log(math.comb(2 * n, n)) - log_central_binomial_asymptotic(n))


def render_exact(x: Fraction) -> str:
    """Always ``num/den``, including integers (``1/1``)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def round_half_even(x: Fraction, places: int = DEFAULT_PRECISION) -> Decimal:
    """Round an exact rational to ``places`` decimals, ties to even.

    Done on integers so there is exactly one rounding step.
    """
    if places < 0:
        raise ValueError("places must be >= 0")
    x = Fraction(x)
    scaled = x * 10**places
    q, r = divmod(scaled.numerator, scaled.denominator)
    twice = 2 * r
    if twice > scaled.denominator or (twice == scaled.denominator and q % 2):
        q += 1
    return Decimal(q).scaleb(-places)


def to_decimal(x: Fraction, places: int = DEFAULT_PRECISION) -> str:
    """Fixed-point rendering, e.g. ``to_decimal(Fraction(1, 3), 3) == "0.333"``."""
    d = round_half_even(x, places)
    return f"{d:.{places}f}"
