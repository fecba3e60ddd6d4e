"""Words: canonical forms of free scaled products over opaque II1 factors.

A based word ``<N^b | Q^c@t, ... | r>`` stands for

    N_{sqrt b} (*) [sqrt t, Q_{sqrt c}] (*) ... * L(F_r)

with every scale stored squared.  A letter ``Q^c@t`` is the body ``Q``
rescaled by ``sqrt c`` and supported under a projection of trace ``sqrt t``;
its key ``c/t`` is the scale of the free factor ``Q_{1/t}`` that the letter
becomes once lifted to ``t = 1``.  A baseless word has all of its letters at
``t = 1`` and is the plain free product of its letters with ``L(F_r)``; there
``r`` may be negative (any ``r > 1 - n`` is meaningful).

The quantity ``rho`` (tail plus the sum of the ``t`` values for a based word,
``tail + n - 1`` for a baseless one) is conserved by free trade and scales by
``1/s`` under rescaling.  The canonical representative of a trade class lifts
letters to ``t = 1`` greedily, so two words with the same keys and the same
``rho`` canonicalize to the same value.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Union

from .errors import (IllFormed, NotLicensed, PreconditionViolated,
                     UnsupportedCase)
from .expr import (COLLAPSED, AssumptionSet, FreeProduct, GeometricFamily,
                   Opaque, Rescale, ScaledProduct, is_fclass, well_formed)
from .fclass import (FREE, HYPER_FACTOR, Diffuse, FNormalForm, fdim_nf,
                     free_product_fclass, normalize_fclass, rescale_fclass)
from .scalars import INF, ONE, ZERO, Ext, fmt, geometric_sum, is_inf, mul

MAX_EXPANDED_LETTERS = 10_000


@dataclass(frozen=True)
class Letter:
    """``[sqrt t_sq, body_{sqrt c_sq}]``; an infinite family when ``count`` is INF.

    For a family the k-th member has ``c_sq * c_ratio**(k-1)`` and
    ``t_sq * t_ratio**(k-1)``.
    """
    body: str
    c_sq: Fraction
    t_sq: Fraction
    count: Union[int, float] = 1
    c_ratio: Fraction = ONE
    t_ratio: Fraction = ONE

    @property
    def is_family(self) -> bool:
        return self.count != 1

    @property
    def key(self) -> tuple:
        return (self.body, self.c_sq / self.t_sq, self.c_ratio / self.t_ratio,
                self.is_family)

    def sum_squares(self) -> Ext:
        return geometric_sum(self.t_sq, self.t_ratio, self.count)

    def lifted(self) -> "Letter":
        return Letter(self.body, self.c_sq / self.t_sq, ONE, self.count,
                      self.c_ratio / self.t_ratio, ONE)

    def at(self, t_sq: Fraction) -> "Letter":
        """The same key supported at ``t_sq`` (single letters only)."""
        return replace(self, c_sq=self.c_sq * t_sq / self.t_sq, t_sq=t_sq)

    def sort_key(self) -> tuple:
        return self.key + (-self.t_sq, -self.t_ratio)


@dataclass(frozen=True)
class Base:
    body: Union[str, FNormalForm]
    sq: Fraction = ONE

    @property
    def is_fclass(self) -> bool:
        return isinstance(self.body, FNormalForm)


@dataclass(frozen=True)
class Word:
    base: Base | None
    letters: tuple
    tail: Ext = ZERO
    stable: bool = False

    @property
    def singles(self) -> list:
        return [x for x in self.letters if not x.is_family]

    @property
    def families(self) -> list:
        return [x for x in self.letters if x.is_family]

    def symbols(self) -> set:
        names = {x.body for x in self.letters}
        if self.base is not None and not self.base.is_fclass:
            names.add(self.base.body)
        return names


Form = Union[Word, FNormalForm]


def rho(w: Word) -> Ext:
    """Conserved quantity: extended-view tail plus (factor count - 1)."""
    if w.base is None:
        return w.tail + len(w.letters) - 1
    total = w.tail
    for x in w.letters:
        total = total + x.sum_squares()
    return total


def ext_tail(w: Word) -> Ext:
    """Tail once every single letter is lifted to ``t = 1`` (may be negative)."""
    if w.base is None:
        return w.tail
    total = w.tail
    for x in w.singles:
        total = total + (x.t_sq - 1)
    return total


def _sorted(letters) -> tuple:
    return tuple(sorted(letters, key=Letter.sort_key))


def canonicalize_word(w: Word) -> Word:
    if w.base is None:
        return Word(None, _sorted(w.letters), ZERO if w.stable else w.tail, w.stable)
    tail = w.tail
    singles, fams = [], w.families
    for x in w.singles:
        if x.t_sq > 1:  # [t, Q] with t > 1 is Q_{1/t} * L(F_{t^2 - 1})
            tail = tail + (x.t_sq - 1)
            x = x.lifted()
        singles.append(x)
    if w.stable:
        letters = [x.lifted() for x in singles + fams]
        return Word(w.base, _sorted(letters), ZERO, True)
    n = len(singles)
    total = tail + sum((x.t_sq for x in singles), ZERO)
    if is_inf(tail):
        singles, tail = [x.lifted() for x in singles], INF
    elif total >= n:
        singles, tail = [x.lifted() for x in singles], total - n
    elif total <= 0:
        raise IllFormed(f"word has rho = {fmt(total)} <= 0")
    else:
        order = sorted(singles, key=lambda x: x.key)
        k = min(n - 1, math.ceil(total) - 1)
        share = (total - k) / (n - k)
        singles = [x.lifted() for x in order[:k]] + [x.at(share) for x in order[k:]]
        tail = ZERO
    return Word(w.base, _sorted(singles + fams), tail, False)


def rescale_word(w: Word, sq: Fraction) -> Word:
    if sq == 1:
        return w
    if w.base is None:
        n = len(w.letters)
        letters = [replace(x, c_sq=x.c_sq * sq) for x in w.letters]
        tail = w.tail / sq + (n - 1) * (1 / sq - 1)
        return canonicalize_word(Word(None, tuple(letters), tail, w.stable))
    if w.base.is_fclass:
        base = Base(rescale_fclass(w.base.body, sq), ONE)
    else:
        base = Base(w.base.body, w.base.sq * sq)
    letters = [replace(x, t_sq=x.t_sq / sq) for x in w.letters]
    return canonicalize_word(Word(base, tuple(letters), w.tail / sq, w.stable))


def trade_step(w: Word, index: int, new_t_sq: Fraction) -> Word:
    """Move letter ``index`` to support ``new_t_sq``, paying with the tail.

    The result is not re-canonicalized, so the trade stays visible.
    """
    if w.base is None:
        raise PreconditionViolated("free trade needs a base factor")
    if w.stable:
        raise PreconditionViolated("a stable word has no finite tail to trade against")
    if not 0 <= index < len(w.letters):
        raise PreconditionViolated(f"no letter #{index + 1}")
    x = w.letters[index]
    if x.is_family:
        raise PreconditionViolated("letter families are not traded")
    if new_t_sq <= 0:
        raise PreconditionViolated("support scale must be positive")
    if new_t_sq == x.t_sq:
        return w
    tail = w.tail + (x.t_sq - new_t_sq)
    if tail < 0:
        raise PreconditionViolated(
            f"tail would become {fmt(tail)} < 0 (deficit {fmt(-tail)})", deficit=-tail)
    letters = list(w.letters)
    letters[index] = x.at(new_t_sq)
    return Word(w.base, tuple(letters), tail, w.stable)


def trade_plan(w: Word, targets: dict) -> list:
    """Order simultaneous trades so that every single step is legal."""
    if w.base is None:
        raise PreconditionViolated("free trade needs a base factor")
    budget = w.tail
    for i, new in targets.items():
        if not 0 <= i < len(w.letters):
            raise PreconditionViolated(f"no letter #{i + 1}")
        budget = budget + (w.letters[i].t_sq - new)
    if budget < 0:
        raise PreconditionViolated(
            f"r' = {fmt(budget)} < 0 (deficit {fmt(-budget)})", deficit=-budget)
    moves = [(i, new) for i, new in sorted(targets.items()) if new != w.letters[i].t_sq]
    return ([m for m in moves if m[1] < w.letters[m[0]].t_sq]
            + [m for m in moves if m[1] > w.letters[m[0]].t_sq])


def trade_to_target(w: Word, targets: dict) -> Word:
    for i, new in trade_plan(w, targets):
        w = trade_step(w, i, new)
    return w


def absorb_license(w: Word, a: AssumptionSet) -> str | None:
    """The hypothesis that licenses L(F_inf)-absorption, or None."""
    if w.stable:
        return "already stable"
    stable = sorted(w.symbols() & a.stable)
    if stable:
        return f"{stable[0]} is stable"
    fams = w.families
    if any(f.t_ratio == 1 for f in fams):
        return "family with divergent sum of squares"
    if fams and is_inf(w.tail):
        return "infinite family over an L(F_inf) tail"
    if fams and a.mode == COLLAPSED:
        return "infinite family in collapsed mode"
    return None


def absorb_stable(w: Word, a: AssumptionSet) -> Word:
    reason = absorb_license(w, a)
    if reason is None:
        raise NotLicensed("no stability hypothesis applies to this word")
    return canonicalize_word(replace(w, stable=True))


def collapse_form(f: Form) -> Form:
    """Collapsed mode: every free group parameter and positive tail becomes inf."""
    if isinstance(f, FNormalForm):
        parts = [Diffuse(d.kind, d.weight, INF) if d.kind == FREE else d for d in f.diffuse]
        return FNormalForm(tuple(parts), f.blocks, f.atoms)
    base = f.base
    if base is not None and base.is_fclass:
        base = Base(collapse_form(base.body), ONE)
    tail = INF if f.tail > 0 else f.tail
    return canonicalize_word(Word(base, f.letters, tail, f.stable))


# -- building words from expressions ------------------------------------------

def _pure(t: Ext) -> FNormalForm:
    """``L(F_t)``, read as R when ``t == 1``."""
    if t == 1:
        return FNormalForm(diffuse=(Diffuse(HYPER_FACTOR, ONE),))
    if t < 1:
        raise UnsupportedCase(f"free group budget {fmt(t)} < 1 has no factor reading")
    return FNormalForm(diffuse=(Diffuse(FREE, ONE, t),))


def _settle(w: Word, a: AssumptionSet) -> Form:
    if w.base is not None and w.base.is_fclass and not w.letters:
        return _pure(fdim_nf(w.base.body) + w.tail)
    if absorb_license(w, a) is not None:
        return absorb_stable(w, a)
    return canonicalize_word(w)


def _promote(w: Word) -> Word:
    """Use the first letter of a baseless word as its base."""
    first, *rest = w.letters
    return Word(Base(first.body, first.c_sq), tuple(rest), w.tail, w.stable)


def _nf_as_base(nf: FNormalForm) -> Word:
    if not nf.is_ii1_factor:
        raise IllFormed("scaled product base is not a II1 factor")
    return Word(Base(nf, ONE), (), ZERO)


def _letters_of(part: Form, sq: Fraction):
    """Letters and tail contribution of ``[sqrt sq, part]``."""
    if isinstance(part, FNormalForm):
        f = fdim_nf(part)
        return [], (ZERO if f == 0 else mul(sq, f)), False
    if part.base is None:
        letters = [replace(x, t_sq=x.t_sq * sq) for x in part.letters]
        return letters, mul(sq, part.tail) if part.tail else ZERO, part.stable
    letters = [replace(x, t_sq=x.t_sq * sq) for x in part.letters]
    if part.base.is_fclass:
        extra = mul(sq, fdim_nf(part.base.body))
    else:
        letters.append(Letter(part.base.body, part.base.sq, sq))
        extra = ZERO
    tail = mul(sq, part.tail) if part.tail else ZERO
    return letters, tail + extra, part.stable


def _family_letters(fam: GeometricFamily, part: Form):
    if isinstance(part, FNormalForm):
        f = fdim_nf(part)
        total = geometric_sum(fam.first_sq, fam.ratio, fam.count)
        return [], (ZERO if f == 0 else mul(total, f)), False
    if not is_inf(fam.count):
        if fam.count > MAX_EXPANDED_LETTERS:
            raise UnsupportedCase(f"family of {fam.count} letters is too large to expand")
        letters, tail, stable = [], ZERO, part.stable
        for k in range(fam.count):
            ls, t, _ = _letters_of(part, fam.first_sq * fam.ratio**k)
            letters += ls
            tail = tail + t
        return letters, tail, stable
    if part.base is not None or len(part.letters) != 1 or part.tail != 0:
        raise UnsupportedCase("infinite families need a single opaque body")
    (x,) = part.letters
    return [Letter(x.body, x.c_sq, fam.first_sq, INF, ONE, fam.ratio)], ZERO, part.stable


def _build(e, a: AssumptionSet) -> Form:
    if is_fclass(e):
        return normalize_fclass(e)
    if isinstance(e, Opaque):
        return _settle(Word(None, (Letter(e.name, ONE, ONE),), ZERO), a)
    if isinstance(e, Rescale):
        part = _build(e.body, a)
        if isinstance(part, FNormalForm):
            return rescale_fclass(part, e.sq)
        return _settle(rescale_word(part, e.sq), a)
    if isinstance(e, FreeProduct):
        return _free_product([_build(x, a) for x in e.factors], a)
    if isinstance(e, ScaledProduct):
        return _scaled_product(e, a)
    raise IllFormed(f"cannot build a word from {type(e).__name__}")


def _free_product(parts: list, a: AssumptionSet) -> Form:
    if all(isinstance(p, FNormalForm) for p in parts):
        acc = parts[0]
        for p in parts[1:]:
            acc = free_product_fclass(acc, p)
        return acc
    host = next((i for i, p in enumerate(parts)
                 if isinstance(p, Word) and p.base is not None), None)
    letters, tail, stable = [], ZERO, False
    for i, p in enumerate(parts):
        if i == host:
            continue
        if isinstance(p, FNormalForm):
            tail = tail + fdim_nf(p)
            continue
        stable = stable or p.stable
        if p.base is None:
            letters += p.letters
            tail = tail + p.tail
        else:
            # N * (M (*) [t, Q]) == N (*) [1, M] (*) [t, Q]
            ls, t, _ = _letters_of(p, ONE)
            letters += ls
            tail = tail + t
    if host is None:
        w = Word(None, tuple(letters), tail, stable)
        if not letters:
            return _pure(tail)
        return _settle(w, a)
    h = parts[host]
    w = Word(h.base, h.letters + tuple(letters), h.tail + tail, h.stable or stable)
    return _settle(w, a)


def _scaled_product(e: ScaledProduct, a: AssumptionSet) -> Form:
    base = _build(e.base, a)
    if isinstance(base, FNormalForm):
        host = _nf_as_base(base)
    elif base.base is None:
        host = _promote(base)
    else:
        host = base
    letters, tail, stable = list(host.letters), host.tail, host.stable
    for item in e.letters:
        if isinstance(item, GeometricFamily):
            ls, t, st = _family_letters(item, _build(item.body, a))
        else:
            sq, body = item
            ls, t, st = _letters_of(_build(body, a), sq)
        letters += ls
        tail = tail + t
        stable = stable or st
    return _settle(Word(host.base, tuple(letters), tail, stable), a)


def word_of(e, a: AssumptionSet = AssumptionSet()) -> Form:
    """Canonical form of a well-formed expression: an FNormalForm or a Word."""
    report = well_formed(e)
    if not report.ok:
        raise IllFormed(str(report))
    return _build(e, a)
