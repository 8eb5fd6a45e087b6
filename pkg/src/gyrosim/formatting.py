"""Locale-independent scientific notation used in every text output."""

import math

import numpy as np


def _compact_exponent(text: str) -> str:
    mantissa, _, exponent = text.partition("e")
    return f"{mantissa}e{int(exponent)}"


def fmt_sci(value: float, digits: int = 6) -> str:
    """``5.000000e2`` style: ``digits`` after the point, no ``+`` or leading zeros."""
    value = float(value)
    if not math.isfinite(value):
        return repr(value)
    return _compact_exponent(f"{value:.{digits}e}")


def fmt_full(value: float) -> str:
    """Shortest scientific form that round-trips the double, at least 7 digits."""
    value = float(value)
    if not math.isfinite(value):
        return repr(value)
    return _compact_exponent(np.format_float_scientific(value, unique=True, min_digits=6))
