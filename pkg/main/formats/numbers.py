"""Exact text form of filtration values: ``3``, ``0.25``, ``1/3`` or ``inf``."""

from __future__ import annotations

import math
from fractions import Fraction


def _power_of(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def format_number(value) -> str:
    """Exact decimal when the denominator is 2^a 5^b, otherwise ``a/b``."""
    if value == math.inf:
        return "inf"
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    den = value.denominator
    twos, fives = _power_of(den, 2), _power_of(den, 5)
    if 2**twos * 5**fives != den:
        return f"{value.numerator}/{value.denominator}"
    places = max(twos, fives)
    scaled = abs(value.numerator) * 10**places // den
    digits = str(scaled).rjust(places + 1, "0")
    text = f"{digits[:-places]}.{digits[-places:]}".rstrip("0").rstrip(".")
    return f"-{text}" if value < 0 else text


def parse_number(token: str):
    """Inverse of ``format_number``; raises ValueError on malformed input."""
    text = token.strip()
    if text.lower() in ("inf", "+inf", "infinity"):
        return math.inf
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise ValueError(f"{token!r} has a zero denominator") from None
