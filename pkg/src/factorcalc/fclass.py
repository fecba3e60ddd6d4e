"""Canonical forms ``L(F_r) (+) D`` for class-F algebras.

A normal form lists its central summands: diffuse parts (free group factors
or hyperfinite), full matrix blocks ``M_n`` (n >= 2) and atoms (copies of the
scalars).  Free products keep only the atoms that arise from pairs of atoms
with trace sum above 1; the rest of the trace is one diffuse part whose
parameter is solved from conservation of free dimension.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NotAFactor, UndefinedFdim, UnrealizableScale, UnsupportedCase
from .expr import (FGF, DirectSum, FreeProduct, Hyperfinite, Matrix, Opaque,
                   Rescale)
from .scalars import INF, ONE, ZERO, Ext, is_inf, mul, rational_sqrt

FREE = "FGF"
HYPER = "H"
HYPER_FACTOR = "R"
_KIND_ORDER = {FREE: 0, HYPER_FACTOR: 1, HYPER: 2}


@dataclass(frozen=True)
class Diffuse:
    kind: str
    weight: Fraction
    r: Ext | None = None  # only for FREE

    def fdim(self) -> Ext:
        return self.r if self.kind == FREE else ONE


@dataclass(frozen=True)
class FNormalForm:
    diffuse: tuple = ()   # Diffuse parts; at most one hyperfinite
    blocks: tuple = ()    # (weight, n) with n >= 2
    atoms: tuple = ()     # weights, descending

    @property
    def parts(self) -> int:
        return len(self.diffuse) + len(self.blocks) + len(self.atoms)

    @property
    def is_factor(self) -> bool:
        if self.parts != 1:
            return False
        return not (self.diffuse and self.diffuse[0].kind == HYPER)

    @property
    def is_ii1_factor(self) -> bool:
        return self.is_factor and bool(self.diffuse)

    @property
    def is_scalars(self) -> bool:
        return self.atoms == (ONE,) and self.parts == 1

    @property
    def dim(self) -> Ext:
        if self.diffuse:
            return INF
        return sum(n * n for _, n in self.blocks) + len(self.atoms)

    @property
    def has_hyperfinite_nonfactor(self) -> bool:
        return any(d.kind == HYPER for d in self.diffuse)


SCALARS = FNormalForm(atoms=(ONE,))


def make_nf(diffuse=(), blocks=(), atoms=()) -> FNormalForm:
    """Sort summands and merge hyperfinite diffuse parts."""
    hyper = [d for d in diffuse if d.kind != FREE]
    free = [d for d in diffuse if d.kind == FREE]
    if len(hyper) > 1:
        hyper = [Diffuse(HYPER, sum((d.weight for d in hyper), ZERO))]
    parts = free + hyper
    parts.sort(key=lambda d: (_KIND_ORDER[d.kind], -d.weight,
                              -1 if is_inf(d.r or 0) else (d.r or 0)))
    blocks = sorted(blocks, key=lambda b: (b[1], -b[0]))
    atoms = sorted(atoms, reverse=True)
    return FNormalForm(tuple(parts), tuple(blocks), tuple(atoms))


def fdim_nf(nf: FNormalForm) -> Ext:
    values = [(d.weight, d.fdim()) for d in nf.diffuse]
    values += [(w, ONE - Fraction(1, n * n)) for w, n in nf.blocks]
    values += [(w, ZERO) for w in nf.atoms]
    if len(values) == 1:
        return values[0][1]
    total = ONE
    for w, f in values:
        if f != 1:
            total = total + mul(w * w, f - 1)
    return total


def nf_to_expr(nf: FNormalForm):
    leaves = []
    for d in nf.diffuse:
        if d.kind == FREE:
            leaves.append((d.weight, FGF(d.r)))
        else:
            leaves.append((d.weight, Hyperfinite(d.kind == HYPER_FACTOR)))
    leaves += [(w, Matrix(n)) for w, n in nf.blocks]
    leaves += [(w, Matrix(1)) for w in nf.atoms]
    if len(leaves) == 1:
        return leaves[0][1]
    return DirectSum(tuple(leaves))


def _leaf(e) -> FNormalForm:
    if isinstance(e, FGF):
        return FNormalForm(diffuse=(Diffuse(FREE, ONE, e.r),))
    if isinstance(e, Hyperfinite):
        return FNormalForm(diffuse=(Diffuse(HYPER_FACTOR if e.factor else HYPER, ONE),))
    if e.n == 1:
        return SCALARS
    return FNormalForm(blocks=((ONE, e.n),))


def normalize_fclass(e) -> FNormalForm:
    """Canonical form of a class-F expression (idempotent, fdim-conserving)."""
    if isinstance(e, (FGF, Hyperfinite, Matrix)):
        return _leaf(e)
    if isinstance(e, DirectSum):
        diffuse, blocks, atoms = [], [], []
        for w, x in e.terms:
            sub = normalize_fclass(x)
            diffuse += [Diffuse(d.kind, w * d.weight, d.r) for d in sub.diffuse]
            blocks += [(w * bw, n) for bw, n in sub.blocks]
            atoms += [w * a for a in sub.atoms]
        return make_nf(diffuse, blocks, atoms)
    if isinstance(e, FreeProduct):
        acc = normalize_fclass(e.factors[0])
        for x in e.factors[1:]:
            acc = free_product_fclass(acc, normalize_fclass(x))
        return acc
    if isinstance(e, Rescale):
        return rescale_fclass(normalize_fclass(e.body), e.sq)
    what = e.name if isinstance(e, Opaque) else type(e).__name__
    raise UndefinedFdim(f"not a class-F expression: {what}")


def is_two_atom(nf: FNormalForm) -> bool:
    return not nf.diffuse and not nf.blocks and len(nf.atoms) == 2


def free_product_fclass(a: FNormalForm, b: FNormalForm) -> FNormalForm:
    if a.is_scalars:
        return b
    if b.is_scalars:
        return a
    atoms = [x + y - 1 for x in a.atoms for y in b.atoms if x + y > 1]
    rest = ONE - sum(atoms, ZERO)
    if rest <= 0:
        raise UnsupportedCase("atoms exhaust the trace; no diffuse part left")
    total = fdim_nf(a) + fdim_nf(b)
    if is_inf(total):
        r = INF
    else:
        r = 1 + (total - 1 + sum((x * x for x in atoms), ZERO)) / (rest * rest)
    if is_two_atom(a) and is_two_atom(b):
        if r != 1:
            raise UnsupportedCase(f"two-by-two product solved r = {r}, expected 1")
        part = Diffuse(HYPER, rest)
    elif r > 1:
        part = Diffuse(FREE, rest, r)
    elif r == 1:
        part = Diffuse(HYPER_FACTOR if not atoms else HYPER, rest)
    else:
        raise UnsupportedCase(
            f"solved free group parameter r = {r} < 1; the atom rule does not "
            "determine this product")
    return make_nf([part], [], atoms)


def rescale_fclass(nf: FNormalForm, sq: Fraction) -> FNormalForm:
    """``nf`` compressed or amplified by the scale whose square is ``sq``."""
    if sq == 1:
        return nf
    if not nf.is_factor:
        raise NotAFactor("only factors can be rescaled")
    if nf.diffuse:
        d = nf.diffuse[0]
        if d.kind == HYPER_FACTOR:
            return nf
        r = INF if is_inf(d.r) else 1 + (d.r - 1) / sq
        return FNormalForm(diffuse=(Diffuse(FREE, ONE, r),))
    n = nf.blocks[0][1] if nf.blocks else 1
    t = rational_sqrt(sq)
    if t is None or (t * n).denominator != 1:
        raise UnrealizableScale(f"M_{n} has no rescaling by sqrt({sq})")
    k = int(t * n)
    return _leaf(Matrix(k))
