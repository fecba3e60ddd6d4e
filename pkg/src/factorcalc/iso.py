"""Three-valued isomorphism verdicts.

Two expressions are reported isomorphic only when their canonical forms
agree; they are reported distinct only on data that is an invariant of the
algebra regardless of how free group factors behave (atoms, matrix blocks,
factoriality, amenability of a hyperfinite part, the multiset of opaque free
factors).  Everything else is "not provable".
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .certify import Certificate
from .engine import certified_form
from .expr import AssumptionSet
from .fclass import FREE, HYPER_FACTOR, FNormalForm, fdim_nf
from .lang import print_form
from .scalars import fmt
from .words import ext_tail


@dataclass(frozen=True)
class WordView:
    """Isomorphism-class data of a word: its free factors and extended tail."""
    factors: tuple     # ((symbol, scale_sq), ...) sorted, with repeats
    families: tuple
    tail: object       # extended tail, or "absorbed"


def class_view(f):
    if isinstance(f, FNormalForm):
        return f
    factors = [(x.body, x.c_sq / x.t_sq) for x in f.singles]
    tail = ext_tail(f)
    if f.base is not None:
        if f.base.is_fclass:
            tail = tail + fdim_nf(f.base.body)
        else:
            factors.append((f.base.body, f.base.sq))
    families = sorted((x.body, x.c_sq / x.t_sq, x.c_ratio / x.t_ratio, x.t_sq, x.t_ratio)
                      for x in f.families)
    return WordView(tuple(sorted(factors)), tuple(families), "absorbed" if f.stable else tail)


@dataclass(frozen=True)
class Isomorphic:
    left: Certificate
    right: Certificate

    @property
    def steps(self) -> list:
        return self.left.steps + self.right.steps

    def labels(self) -> list:
        out = []
        for s in self.steps:
            if s.label() not in out:
                out.append(s.label())
        return out

    def render(self) -> str:
        n = len(self.steps)
        text = f"{n} step" + ("" if n == 1 else "s")
        if n:
            text += ": " + ", ".join(self.labels())
        return f"isomorphic ({text})"


@dataclass(frozen=True)
class ProvablyDistinct:
    witness: str
    left: Certificate
    right: Certificate

    def render(self) -> str:
        return f"provably distinct: {self.witness}"


@dataclass(frozen=True)
class NotProvable:
    report: str
    left: Certificate
    right: Certificate

    def render(self) -> str:
        return f"not provable: {self.report}"


def _atoms(nf):
    return "[" + ", ".join(fmt(w) for w in nf.atoms) + "]"


def _blocks(nf):
    return "[" + ", ".join(f"M({n}) at {fmt(w)}" for w, n in nf.blocks) + "]"


def _nf_witness(a: FNormalForm, b: FNormalForm) -> str | None:
    if a.atoms != b.atoms:
        return f"atoms {_atoms(a)} vs {_atoms(b)}"
    if a.blocks != b.blocks:
        return f"matrix blocks {_blocks(a)} vs {_blocks(b)}"
    if a.is_factor != b.is_factor:
        return "factor vs non-factor"
    if a.is_factor and a.diffuse and b.diffuse:
        kinds = {a.diffuse[0].kind, b.diffuse[0].kind}
        if kinds == {FREE, HYPER_FACTOR}:
            return "hyperfinite II1 factor vs free group factor"
    return None


def _multiset(view: WordView) -> str:
    counts = Counter(view.factors)
    return "{" + ", ".join(f"{b}^{fmt(s)}" + (f" x{k}" if k > 1 else "")
                           for (b, s), k in sorted(counts.items())) + "}"


def compare(f1, f2) -> tuple:
    """(kind, detail) for two settled forms; kind is 'iso', 'distinct' or 'open'."""
    v1, v2 = class_view(f1), class_view(f2)
    if v1 == v2:
        if isinstance(v1, FNormalForm) and v1.has_hyperfinite_nonfactor:
            return "open", "equal forms with a diffuse hyperfinite summand of unknown type"
        return "iso", ""
    if isinstance(v1, FNormalForm) and isinstance(v2, FNormalForm):
        witness = _nf_witness(v1, v2)
        return ("distinct", witness) if witness else ("open", "")
    if isinstance(v1, FNormalForm) or isinstance(v2, FNormalForm):
        nf = v1 if isinstance(v1, FNormalForm) else v2
        if not nf.is_ii1_factor:
            return "distinct", "II1 factor vs " + ("non-factor" if not nf.is_factor
                                                   else "finite dimensional factor")
        return "open", ""
    if v1.factors != v2.factors:
        return "distinct", f"opaque free factors {_multiset(v1)} vs {_multiset(v2)}"
    return "open", ""


def iso_verdict(x1, x2, a: AssumptionSet = AssumptionSet()):
    """Verdict for two expressions (or already built forms) under ``a``."""
    f1, c1 = certified_form(x1, a)
    f2, c2 = certified_form(x2, a)
    kind, detail = compare(f1, f2)
    if kind == "iso" or x1 == x2:
        return Isomorphic(c1, c2)
    if kind == "distinct":
        return ProvablyDistinct(detail, c1, c2)
    report = f"{print_form(f1)} vs {print_form(f2)}"
    if detail:
        report += f" ({detail})"
    return NotProvable(report, c1, c2)


__all__ = ["Isomorphic", "ProvablyDistinct", "NotProvable", "iso_verdict",
           "class_view", "compare", "WordView"]
