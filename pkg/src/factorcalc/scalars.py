"""Exact scalars: rationals, the extended value ``INF``, and squared scales.

Every quantity in the engine is a :class:`fractions.Fraction`, except the
single extended value ``INF`` (``math.inf``) used for L(F_inf) parameters,
infinite fdim values and divergent sums.  Scales ``t > 0`` are never stored
directly; we keep ``t**2`` so that values such as ``2**(-k/2)`` stay rational.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

INF = math.inf
ONE = Fraction(1)
ZERO = Fraction(0)

Ext = Union[Fraction, float]  # a Fraction, or INF


def is_inf(x) -> bool:
    return isinstance(x, float) and x == INF


def ext(x) -> Ext:
    """Coerce ints/strings/Fractions to an exact value; floats only as INF."""
    if isinstance(x, float):
        if x != INF:
            raise TypeError(f"inexact float {x!r}; use Fraction")
        return INF
    if isinstance(x, str):
        if x.strip() == "inf":
            return INF
        return Fraction(x.strip())
    return Fraction(x)


def mul(a: Ext, b: Ext) -> Ext:
    if is_inf(a) or is_inf(b):
        if a == 0 or b == 0:
            raise ArithmeticError("0 * inf is undefined")
        if a < 0 or b < 0:
            raise ArithmeticError("negative * inf is not used by any rule")
        return INF
    return a * b


def fmt(x: Ext) -> str:
    if is_inf(x):
        return "inf"
    return str(Fraction(x))


def rational_sqrt(sq: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    sq = Fraction(sq)
    if sq < 0:
        return None
    p, q = sq.numerator, sq.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


def scale_text(sq: Fraction) -> str:
    """Render a squared scale as the scale ``t`` itself when ``t`` is rational."""
    root = rational_sqrt(sq)
    if root is not None:
        return str(root)
    return f"sqrt({Fraction(sq)})"


def geometric_sum(first: Fraction, ratio: Fraction, count) -> Ext:
    """Sum of ``first * ratio**k`` for ``k < count`` (``count`` may be INF)."""
    if ratio == 1:
        return INF if is_inf(count) else first * count
    if is_inf(count):
        return first / (1 - ratio)
    return first * (1 - ratio**count) / (1 - ratio)
