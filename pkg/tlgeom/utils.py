"""
Small formatting helpers shared by reports and error messages.
"""
import math
from typing import Any, Iterable, List, Optional

import numpy.typing as npt

FULL_PRECISION_DIGITS = 17


def float_to_str(number: Optional[float], show_num_of_digits: Optional[int] = None) -> str:
    """Convert float number to string.

    Args:
        number: float number to convert to string. ``None`` gives an empty string.
        show_num_of_digits: number of decimal places after `.`. If ``None``,
            the number is written with 17 significant digits (exact
            round-trip of a 64-bit float).
    """
    if number is None:
        return ""
    if show_num_of_digits is None:
        if math.isfinite(number) and number == int(number) and abs(number) < 1e16:
            return f"{number:.1f}"
        return "{:.{}g}".format(number, FULL_PRECISION_DIGITS)

    number = round(number, show_num_of_digits)
    if show_num_of_digits == 0:
        number_str = str(int(number))
    else:
        number_str = "{:.{}f}".format(number, show_num_of_digits)

    return number_str


def vector_to_str(vector: npt.ArrayLike, show_num_of_digits: Optional[int] = None) -> str:
    """Return ``[x1, x2, ...]`` string of a vector."""
    return "[" + get_list_str([float_to_str(float(x), show_num_of_digits) for x in vector]) + "]"


def get_list_str(data: Iterable[Any], separator: str = ", ") -> str:
    """Return a human readable list string (for printing purposes).

    Args:
        data: list to transform to string.
        separator: separator to join list items with.
    """
    data_str: List[str] = []
    for item in data:
        data_str.append(str(item))

    return separator.join(data_str)
