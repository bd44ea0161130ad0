"""Extended-real arithmetic on ``[-inf, +inf]``.

Values are plain Python numbers: ``Fraction`` or ``float`` for finite values
and ``math.inf`` / ``-math.inf`` for the infinities.  The helpers below apply
the conventions used throughout the package:

* ``0 * (+-inf) = 0``
* ``inf + (-inf) = inf``
* ``u - v`` is ``u + (-v)``
* ``inf(empty set) = inf``
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Union

Number = Union[Fraction, float, int]

INF = math.inf
NEG_INF = -math.inf


def is_pos_inf(x: Number) -> bool:
    return x == INF


def is_neg_inf(x: Number) -> bool:
    return x == NEG_INF


def is_finite(x: Number) -> bool:
    return x != INF and x != NEG_INF


def ext_neg(a: Number) -> Number:
    return -a


def ext_add(a: Number, b: Number) -> Number:
    """Sum with ``inf + (-inf) = inf``."""
    if a == INF or b == INF:
        return INF
    if a == NEG_INF or b == NEG_INF:
        return NEG_INF
    return a + b


def ext_sub(a: Number, b: Number) -> Number:
    return ext_add(a, -b)


def ext_scale(c: Number, a: Number) -> Number:
    """Product of a finite scalar with an extended real, ``0 * inf = 0``."""
    if not is_finite(c):
        raise ValueError("scale factor must be finite")
    if is_finite(a):
        return c * a
    if c == 0:
        return c
    return INF if (c > 0) == (a > 0) else NEG_INF


def ext_sum(values: Iterable[Number], start: Number = 0) -> Number:
    total = start
    for v in values:
        total = ext_add(total, v)
    return total


def ext_inf(values: Iterable[Number]) -> Number:
    """Infimum with ``inf(empty) = +inf``."""
    return min(values, default=INF)


def ext_sup(values: Iterable[Number]) -> Number:
    return max(values, default=NEG_INF)


def pos_part(a: Number) -> Number:
    return a if a > 0 else 0 * a if is_finite(a) else 0


def neg_part(a: Number) -> Number:
    return pos_part(-a)


def parse_ext(text: Union[str, Number], exact: bool = True) -> Number:
    """Parse ``"inf"``, ``"-inf"``, ``"p/q"``, decimal literals or numbers."""
    if isinstance(text, bool):
        raise ValueError(f"not a number: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text) if exact else float(text)
    if isinstance(text, float):
        if math.isnan(text):
            raise ValueError("NaN is not an extended real")
        if math.isinf(text):
            return text
        return Fraction(repr(text)) if exact else text
    s = str(text).strip().lower()
    if s in ("inf", "+inf", "infinity", "+infinity"):
        return INF
    if s in ("-inf", "-infinity"):
        return NEG_INF
    try:
        value = Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a number: {text!r}") from exc
    return value if exact else float(value)


def to_jsonable(x: Number) -> Union[int, float, str]:
    """Encode a value for JSON; infinities and non-integral rationals become strings."""
    if x == INF:
        return "inf"
    if x == NEG_INF:
        return "-inf"
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return int(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return x
    return float(x)


def format_ext(x: Number) -> str:
    v = to_jsonable(x)
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)
