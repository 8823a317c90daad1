"""Exact arithmetic on positive rationals.

Conversion factors, prefix values, and rule ratios all live in the
multiplicative group of positive rationals. Everything here is exact:
values are `fractions.Fraction` instances and floats never appear.
"""

from __future__ import annotations

import re
from fractions import Fraction

__all__ = [
    "ONE",
    "Ratio",
    "RatioError",
    "ratio_make",
    "ratio_mul",
    "ratio_inv",
    "ratio_pow",
    "ratio_parse",
    "ratio_text",
    "ratio_to_decimal",
]

Ratio = Fraction

ONE = Fraction(1)

MAX_DECIMAL_DIGITS = 50


class RatioError(ValueError):
    """Raised for values or text that do not denote a positive rational."""


def ratio_make(num: int, den: int = 1) -> Fraction:
    """Build a reduced positive ratio from an integer numerator and denominator."""
    if isinstance(num, bool) or isinstance(den, bool):
        raise RatioError("ratio components must be integers, not booleans")
    if not isinstance(num, int) or not isinstance(den, int):
        raise RatioError(f"ratio components must be integers, got {num!r}/{den!r}")
    if num < 1 or den < 1:
        raise RatioError(f"ratio components must be positive, got {num}/{den}")
    return Fraction(num, den)


def ratio_mul(a: Fraction, b: Fraction) -> Fraction:
    return a * b


def ratio_inv(a: Fraction) -> Fraction:
    return 1 / a


def ratio_pow(a: Fraction, exponent: int) -> Fraction:
    return a ** exponent


_INT_RE = re.compile(r"[0-9]+\Z")
_POWER_RE = re.compile(r"([0-9]+)\^(-?[0-9]+)\Z")
_DECIMAL_RE = re.compile(r"([0-9]+)\.([0-9]+)\Z")


def ratio_parse(text: str) -> Fraction:
    """Parse ratio text into an exact positive rational.

    Accepted forms: a fraction "p/q" of positive integers, a positive
    integer "n", an integer power "B^E" with base B >= 2 (E may be
    negative), and a decimal "d.ddd" read exactly as digits times a power
    of ten. Anything else, and anything non-positive, raises RatioError.
    """
    s = text.strip()
    if "/" in s:
        head, _, tail = s.partition("/")
        if not (_INT_RE.match(head) and _INT_RE.match(tail)):
            raise RatioError(f"not a positive fraction: {text!r}")
        num, den = int(head), int(tail)
        if num < 1 or den < 1:
            raise RatioError(f"fraction components must be positive: {text!r}")
        return Fraction(num, den)
    power = _POWER_RE.match(s)
    if power is not None:
        base, exponent = int(power.group(1)), int(power.group(2))
        if base < 2:
            raise RatioError(f"power base must be at least 2: {text!r}")
        return Fraction(base) ** exponent
    decimal = _DECIMAL_RE.match(s)
    if decimal is not None:
        digits = decimal.group(1) + decimal.group(2)
        value = Fraction(int(digits), 10 ** len(decimal.group(2)))
        if value <= 0:
            raise RatioError(f"ratio must be positive: {text!r}")
        return value
    if _INT_RE.match(s):
        value = int(s)
        if value < 1:
            raise RatioError(f"ratio must be positive: {text!r}")
        return Fraction(value)
    raise RatioError(f"not a ratio: {text!r}")


def ratio_text(a: Fraction) -> str:
    """Canonical rendering: "n" for integers, "p/q" otherwise."""
    if a.denominator == 1:
        return str(a.numerator)
    return f"{a.numerator}/{a.denominator}"


def ratio_to_decimal(a: Fraction, digits: int = 15) -> tuple[str, bool]:
    """Render a ratio as a decimal with at most `digits` fractional places.

    Rounds half to even. Returns the text together with an exactness flag:
    True when the decimal expansion terminated within `digits` places, so
    the text is the exact value rather than a rounding of it. Trailing
    fractional zeros are dropped.
    """
    if not isinstance(digits, int) or isinstance(digits, bool):
        raise RatioError(f"digits must be an integer, got {digits!r}")
    if digits < 0 or digits > MAX_DECIMAL_DIGITS:
        raise RatioError(f"digits must be between 0 and {MAX_DECIMAL_DIGITS}")
    scaled, remainder = divmod(a.numerator * 10 ** digits, a.denominator)
    exact = remainder == 0
    doubled = 2 * remainder
    if doubled > a.denominator or (doubled == a.denominator and scaled % 2 == 1):
        scaled += 1
    body = str(scaled)
    if digits:
        body = body.rjust(digits + 1, "0")
        whole, frac = body[:-digits], body[-digits:]
        frac = frac.rstrip("0")
        body = f"{whole}.{frac}" if frac else whole
    return body, exact
