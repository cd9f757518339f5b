"""Probability values for the two numeric backends.

Exact instances carry ``fractions.Fraction``; float instances carry ``float``
and compare with the tolerances in ``ToleranceConfig``.
"""

import math
from fractions import Fraction
from numbers import Real
from typing import Any, Union

from lllcore.config.constants import ToleranceConfig
from lllcore.core.errors import InputError

Prob = Union[Fraction, float]


def parse_probability(value: Any) -> Prob:
    """Parse a JSON probability.

    Strings ("1/3", "0.25") and ints become Fractions; floats stay floats.

    Raises:
        InputError: When the value is not a number in [0, 1]
    """
    if isinstance(value, bool):
        raise InputError(f"Probability must be numeric, got {value!r}")
    if isinstance(value, Fraction):
        result = value
    elif isinstance(value, int):
        result = Fraction(value)
    elif isinstance(value, float):
        result = value
    elif isinstance(value, str):
        try:
            result = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f"Cannot parse probability {value!r}")
    else:
        raise InputError(f"Probability must be numeric, got {value!r}")

    if not (0 <= result <= 1) or (isinstance(result, float) and math.isnan(result)):
        raise InputError(f"Probability {value!r} outside [0, 1]")
    return result


def parse_positive(value: Any) -> Prob:
    """Parse a positive real (charges, μ, θ) with the same exact/float rule."""
    if isinstance(value, bool):
        raise InputError(f"Value must be numeric, got {value!r}")
    if isinstance(value, str):
        try:
            result = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f"Cannot parse number {value!r}")
    elif isinstance(value, int):
        result = Fraction(value)
    elif isinstance(value, (float, Fraction)):
        result = value
    else:
        raise InputError(f"Value must be numeric, got {value!r}")
    if not result > 0:
        raise InputError(f"Value {value!r} must be positive")
    return result


def is_exact(value: Any) -> bool:
    return isinstance(value, (Fraction, int)) and not isinstance(value, bool)


def close(a: Real, b: Real, tol: float = ToleranceConfig.PRODUCT_EQUALITY) -> bool:
    """Exact equality for rationals, tolerance comparison otherwise."""
    if is_exact(a) and is_exact(b):
        return a == b
    return math.isclose(float(a), float(b), rel_tol=ToleranceConfig.RELATIVE, abs_tol=tol)


def leq(a: Real, b: Real, tol: float = ToleranceConfig.PRODUCT_EQUALITY) -> bool:
    """a ≤ b, exact for rationals and with slack ``tol`` for floats."""
    if is_exact(a) and is_exact(b):
        return a <= b
    return float(a) <= float(b) + tol


def to_json_number(value: Real) -> Union[str, float, int]:
    """Rationals serialize as "p/q" strings, floats as floats."""
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else value.numerator
    if isinstance(value, int):
        return value
    return float(value)
