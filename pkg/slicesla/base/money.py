"""Decimal currency helpers."""
from decimal import Decimal
from decimal import ROUND_HALF_EVEN
from typing import Union

Number = Union[Decimal, int, float, str]

# Fixed-point precision used when an amount leaves the engine (reports, CSV)
CURRENCY_QUANTUM = Decimal("0.0001")

ZERO = Decimal(0)


def to_decimal(value: Number) -> Decimal:
    """Convert the value to a `Decimal`, going through `repr` for floats so 0.1 stays 0.1."""
    if isinstance(value, Decimal):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not amounts")
    if isinstance(value, float):
        return Decimal(repr(value))
    return Decimal(value)


def money(value: Number) -> Decimal:
    """Quantize the amount to the currency precision (4 fractional digits)."""
    return to_decimal(value).quantize(CURRENCY_QUANTUM, rounding=ROUND_HALF_EVEN)


def fmt_decimal(value: Number) -> str:
    """Render a decimal without exponent nor trailing zeros (`Decimal("5.0")` -> "5")."""
    d = to_decimal(value)
    if d == d.to_integral_value():
        return str(d.quantize(Decimal(1)))
    return format(d.normalize(), "f")
