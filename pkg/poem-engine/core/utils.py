"""Utility functions for the poem engine."""

import functools
import logging
from decimal import ROUND_HALF_UP, Decimal
from typing import Optional

logger = logging.getLogger(__name__)

_THOUSANDTH = Decimal("0.001")


def dont_throw(func):
    """Decorator to catch exceptions and log them without raising."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except Exception as e:
            logger.warning(f"Exception caught in {func.__name__}: {e}")
            logger.debug(f"Exception details:", exc_info=True)

    return wrapper


def round_half_up(value: float) -> Decimal:
    """Round to 3 decimals, halves away from zero, using the shortest repr of the float."""
    return Decimal(repr(value)).quantize(_THOUSANDTH, rounding=ROUND_HALF_UP)


def format_value(value: Optional[float], missing: str = "-") -> str:
    """Render a criterion value the way the tables print it: 0.6, 1, 0.333, '-'."""
    if value is None:
        return missing
    text = format(round_half_up(value), "f")
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    return text
