"""Certified entry points: every operation returns its result with a certificate."""
from __future__ import annotations

from fractions import Fraction

from .certify import Certificate, assumptions_binding, make_step
from .errors import IllFormed
from .expr import (COLLAPSED, AssumptionSet, DirectSum, FreeProduct, Rescale,
                   children, is_fclass, well_formed)
from .fclass import FREE, FNormalForm, normalize_fclass, rescale_fclass
from .lang import print_expr, print_form
from .words import (Form, Word, absorb_license, absorb_stable, canonicalize_word,
                    collapse_form, rescale_word, trade_plan, trade_step, word_of)


def _is_fgf(nf: FNormalForm) -> bool:
    return nf.parts == 1 and bool(nf.diffuse) and nf.diffuse[0].kind == FREE


def fclass_laws(e) -> str:
    """Names of the class-F laws a normalization of ``e`` uses, in tree order."""
    laws = []

    def visit(x):
        for c in children(x):
            visit(c)
        if isinstance(x, FreeProduct):
            if all(_is_fgf(normalize_fclass(f)) for f in x.factors):
                law = "FGF additivity"
            else:
                law = "free product normal form"
        elif isinstance(x, DirectSum):
            law = "direct sum normal form"
        elif isinstance(x, Rescale):
            law = "rescaling formula"
        else:
            return
        if law not in laws:
            laws.append(law)

    visit(e)
    return ", ".join(laws) or "normal form"


def _cert(initial: str, *steps) -> Certificate:
    kept, here = [], initial
    for s in steps:
        if s.after != s.before:
            kept.append(s)
            here = s.after
    return Certificate(initial, kept, here)


def normalize(e, a: AssumptionSet = AssumptionSet()):
    """Canonical form of an expression (FNormalForm or Word) and its certificate."""
    report = well_formed(e)
    if not report.ok:
        raise IllFormed(str(report))
    before = print_expr(e)
    if is_fclass(e):
        nf = normalize_fclass(e)
        step = make_step("fclass-normalize", before, nf, law=fclass_laws(e))
        return nf, _cert(before, step)
    f = word_of(e, a)
    return f, _cert(before, make_step("to-word", before, f, **assumptions_binding(a)))


to_word = normalize


def rescale(f: Form, sq: Fraction):
    out = rescale_fclass(f, sq) if isinstance(f, FNormalForm) else rescale_word(f, sq)
    return out, _cert(print_form(f), make_step("rescale", f, out, s=sq))


def trade(w: Word, index: int, new_t_sq: Fraction):
    """``index`` is 0-based; certificates record it 1-based."""
    out = trade_step(w, index, new_t_sq)
    return out, _cert(print_form(w), make_step("trade", w, out, letter=index + 1, t_sq=new_t_sq))


def trade_all(w: Word, targets: dict):
    steps, here = [], w
    for i, new in trade_plan(w, targets):
        nxt = trade_step(here, i, new)
        steps.append(make_step("trade", here, nxt, letter=i + 1, t_sq=new))
        here = nxt
    return here, _cert(print_form(w), *steps)


def canonicalize(w: Word):
    out = canonicalize_word(w)
    return out, _cert(print_form(w), make_step("canonicalize", w, out))


def absorb(w: Word, a: AssumptionSet):
    out = absorb_stable(w, a)
    return out, _cert(print_form(w), make_step("absorb-stable", w, out, **assumptions_binding(a)))


def settle(f: Form, a: AssumptionSet):
    """Bring a form to the canonical representative compared by the iso checker."""
    steps, here = [], f
    if isinstance(here, Word):
        nxt = canonicalize_word(here)
        steps.append(make_step("canonicalize", here, nxt))
        here = nxt
        if absorb_license(here, a) is not None and not here.stable:
            nxt = absorb_stable(here, a)
            steps.append(make_step("absorb-stable", here, nxt, **assumptions_binding(a)))
            here = nxt
    if a.mode == COLLAPSED:
        nxt = collapse_form(here)
        steps.append(make_step("collapse", here, nxt))
        here = nxt
    return here, _cert(print_form(f), *steps)


def certified_form(x, a: AssumptionSet):
    """Normalize an expression, or settle an already-built form."""
    if isinstance(x, (Word, FNormalForm)):
        return settle(x, a)
    f, cert = normalize(x, a)
    g, more = settle(f, a)
    return g, cert.then(more)
