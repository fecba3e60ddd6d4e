"""Free dimension of class-F expressions, computed structurally on the tree."""
from __future__ import annotations

from fractions import Fraction

from .errors import UndefinedFdim
from .expr import FGF, DirectSum, FreeProduct, GeometricFamily, Hyperfinite, Matrix
from .scalars import ONE, Ext, geometric_sum, mul


def fdim(e) -> Ext:
    """Free dimension of a class-F expression.

    Direct sums use ``1 + sum(w**2 * (fdim(A_i) - 1))``; free products add.
    Opaque factors, scaled products and rescalings have no free dimension
    here (normalize rescalings with :func:`normalize_fclass` first).
    """
    if isinstance(e, FGF):
        return e.r
    if isinstance(e, Hyperfinite):
        return ONE
    if isinstance(e, Matrix):
        return ONE - Fraction(1, e.n * e.n)
    if isinstance(e, DirectSum):
        total = ONE
        for w, x in e.terms:
            excess = fdim(x) - 1
            if excess:
                total = total + mul(w * w, excess)
        return total
    if isinstance(e, FreeProduct):
        total = Fraction(0)
        for x in e.factors:
            total = total + fdim(x)
        return total
    raise UndefinedFdim(f"free dimension is undefined on {type(e).__name__} nodes")


def sum_squares(f: GeometricFamily) -> Ext:
    """Closed form of sum over the family of t(k)**2."""
    return geometric_sum(f.first_sq, f.ratio, f.count)
