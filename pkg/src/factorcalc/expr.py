"""Expression trees for tracial von Neumann algebras, plus well-formedness."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .scalars import INF, ONE, Ext, fmt, is_inf


@dataclass(frozen=True)
class FGF:
    """Interpolated free group factor L(F_r), 1 < r <= inf."""
    r: Ext


@dataclass(frozen=True)
class Hyperfinite:
    """Diffuse hyperfinite algebra; ``factor=True`` is the II1 factor R."""
    factor: bool = False


@dataclass(frozen=True)
class Matrix:
    n: int


@dataclass(frozen=True)
class Opaque:
    name: str


@dataclass(frozen=True)
class DirectSum:
    terms: tuple  # ((weight, Expr), ...)


@dataclass(frozen=True)
class FreeProduct:
    factors: tuple


@dataclass(frozen=True)
class Rescale:
    body: "Expr"
    sq: Fraction


@dataclass(frozen=True)
class GeometricFamily:
    """Letters ``[t(k), body]`` with ``t(k)**2 = first_sq * ratio**(k-1)``."""
    first_sq: Fraction
    ratio: Fraction
    count: Union[int, float]
    body: "Expr"


@dataclass(frozen=True)
class ScaledProduct:
    base: "Expr"
    letters: tuple  # items: (sq, Expr) pairs or GeometricFamily


Expr = Union[FGF, Hyperfinite, Matrix, Opaque, DirectSum, FreeProduct, Rescale,
             ScaledProduct, GeometricFamily]

C = Matrix(1)
H = Hyperfinite(False)
R = Hyperfinite(True)

DISTINCT = "distinct"
COLLAPSED = "collapsed"


@dataclass(frozen=True)
class AssumptionSet:
    stable: frozenset = frozenset()
    mode: str = DISTINCT

    def assume_stable(self, name: str) -> "AssumptionSet":
        return AssumptionSet(self.stable | {name}, self.mode)

    def with_mode(self, mode: str) -> "AssumptionSet":
        if mode not in (DISTINCT, COLLAPSED):
            raise ValueError(f"unknown mode {mode!r}")
        return AssumptionSet(self.stable, mode)


IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
RESERVED = {"LF", "M", "C", "H", "R", "dsum", "scale", "sub", "fam", "sqrt", "inf"}


def children(e) -> list:
    if isinstance(e, DirectSum):
        return [x for _, x in e.terms]
    if isinstance(e, FreeProduct):
        return list(e.factors)
    if isinstance(e, Rescale):
        return [e.body]
    if isinstance(e, GeometricFamily):
        return [e.body]
    if isinstance(e, ScaledProduct):
        out = [e.base]
        for item in e.letters:
            out.append(item if isinstance(item, GeometricFamily) else item[1])
        return out
    return []


def is_fclass(e) -> bool:
    """True when ``e`` mentions no opaque factor and no scaled product."""
    if isinstance(e, (Opaque, ScaledProduct, GeometricFamily)):
        return False
    return all(is_fclass(c) for c in children(e))


def is_ii1_factor(e) -> bool:
    """Conservative syntactic test that ``e`` denotes a II1 factor."""
    if isinstance(e, (Opaque, ScaledProduct)):
        return True
    if isinstance(e, FGF):
        return True
    if isinstance(e, Hyperfinite):
        return e.factor
    if isinstance(e, Rescale):
        return is_ii1_factor(e.body)
    if isinstance(e, FreeProduct):
        if not is_fclass(e):
            # a free product with a II1 factor among its factors is a factor
            return any(not is_fclass(x) and is_ii1_factor(x) for x in e.factors)
        return _fclass_factor(e, ii1=True)
    return False


def is_factor(e) -> bool:
    if isinstance(e, Matrix):
        return True
    if isinstance(e, FreeProduct) and is_fclass(e):
        return _fclass_factor(e, ii1=False)
    return is_ii1_factor(e)


def _fclass_factor(e, ii1: bool) -> bool:
    from .fclass import normalize_fclass
    try:
        nf = normalize_fclass(e)
    except Exception:
        return False
    if ii1:
        return nf.is_ii1_factor
    return nf.is_factor


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)  # (path, message)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(f"{p}: {m}" for p, m in self.violations)


def well_formed(e) -> ValidationReport:
    report = ValidationReport()
    try:
        _check(e, "expr", report)
    except Exception as exc:  # total by contract
        report.violations.append(("expr", f"unexpected structure: {exc}"))
    return report


def _check(e, path, report):
    bad = report.violations.append
    if isinstance(e, FGF):
        if not (is_inf(e.r) or (isinstance(e.r, Fraction) and e.r > 1)):
            bad((path, f"free group parameter must exceed 1, got {fmt(e.r)}"))
    elif isinstance(e, Hyperfinite):
        pass
    elif isinstance(e, Matrix):
        if not isinstance(e.n, int) or e.n < 1:
            bad((path, f"matrix size must be a positive integer, got {e.n}"))
    elif isinstance(e, Opaque):
        if not IDENT.match(e.name or "") or e.name in RESERVED:
            bad((path, f"bad factor symbol {e.name!r}"))
    elif isinstance(e, DirectSum):
        if len(e.terms) < 2:
            bad((path, "direct sum needs at least 2 summands"))
        total = Fraction(0)
        for i, (w, x) in enumerate(e.terms):
            if not isinstance(w, Fraction) or not (0 < w <= 1):
                bad((f"{path}.terms[{i}]", f"weight {w} not in (0, 1]"))
            else:
                total += w
            _check(x, f"{path}.terms[{i}]", report)
            if not is_fclass(x):
                bad((f"{path}.terms[{i}]", "direct summands must be class F"))
        if total != 1:
            bad((path, f"weights sum to {total} ≠ 1"))
    elif isinstance(e, FreeProduct):
        if len(e.factors) < 2:
            bad((path, "free product needs at least 2 factors"))
        for i, x in enumerate(e.factors):
            _check(x, f"{path}.factors[{i}]", report)
    elif isinstance(e, Rescale):
        if not isinstance(e.sq, Fraction) or e.sq <= 0:
            bad((path, f"scale must be positive, got {e.sq}"))
        _check(e.body, f"{path}.body", report)
        if not is_factor(e.body):
            bad((path, "rescale base is not a factor"))
    elif isinstance(e, ScaledProduct):
        _check(e.base, f"{path}.base", report)
        if not is_ii1_factor(e.base):
            bad((path, "scaled product base is not a II1 factor"))
        if not e.letters:
            bad((path, "scaled product needs at least one letter"))
        for i, item in enumerate(e.letters):
            lp = f"{path}.letters[{i}]"
            if isinstance(item, GeometricFamily):
                _check_family(item, lp, report)
            else:
                sq, body = item
                if not isinstance(sq, Fraction) or sq <= 0:
                    bad((lp, f"letter scale must be positive, got {sq}"))
                    continue
                _check_letter_body(body, sq, lp, report)
    elif isinstance(e, GeometricFamily):
        bad((path, "a letter family may only appear inside sub(...)"))
    else:
        bad((path, f"unknown node {type(e).__name__}"))


def _check_family(f: GeometricFamily, path, report):
    bad = report.violations.append
    if not isinstance(f.first_sq, Fraction) or f.first_sq <= 0:
        bad((path, "family first scale must be positive"))
        return
    if not isinstance(f.ratio, Fraction) or not (0 < f.ratio <= 1):
        bad((path, "family ratio must lie in (0, 1]"))
    if not (is_inf(f.count) or (isinstance(f.count, int) and f.count >= 1)):
        bad((path, "family count must be a positive integer or inf"))
    _check_letter_body(f.body, f.first_sq, path, report)


def _check_letter_body(body, sq, path, report):
    _check(body, f"{path}.body", report)
    if is_fclass(body) and not is_ii1_factor(body):
        if sq > ONE:
            report.violations.append(
                (path, "letter with scale > 1 needs a II1 factor body"))
    elif not is_ii1_factor(body):
        report.violations.append((path, "letter body is not a II1 factor"))


__all__ = [
    "FGF", "Hyperfinite", "Matrix", "Opaque", "DirectSum", "FreeProduct",
    "Rescale", "ScaledProduct", "GeometricFamily", "Expr", "C", "H", "R",
    "AssumptionSet", "DISTINCT", "COLLAPSED", "ValidationReport",
    "well_formed", "is_fclass", "is_factor", "is_ii1_factor", "children", "INF",
]
