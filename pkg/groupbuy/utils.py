from fractions import Fraction
from typing import Iterable


def format_rational(value: Fraction | int) -> str:
    """
    Render an exact rational as a lowest-terms string
    :param value: The rational
    :return: "num/den", or just "num" when the denominator is 1
    """
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str | int) -> Fraction:
    """
    Parse a rational written by format_rational
    :param text: The string (or a plain integer)
    :return: The rational
    """
    if isinstance(text, int):
        return Fraction(text)
    if text.count("/") > 1 or not text.strip():
        raise ValueError(f"`{text}` is not a rational")
    return Fraction(text.strip())


def vendor_set(vendors: Iterable[str]) -> tuple[str, ...]:
    """
    Canonical encoding of a set of vendors
    :param vendors: Vendor ids, possibly repeated
    :return: The sorted tuple of distinct ids
    """
    return tuple(sorted(set(vendors)))
