"""Surface syntax: tokenizer, recursive-descent parser and printers.

Expressions::

    expr   := term ('*' term)*
    term   := 'LF(' q | 'inf' ')' | 'M(' int ')' | 'C' | 'H' | 'R' | ident
            | 'dsum(' q ':' expr (',' q ':' expr)* ')'
            | 'scale(' expr ',' scale ')'
            | 'sub(' expr (',' letter)+ ')'
            | '(' expr ')'
    letter := '[' scale ',' expr ']' | 'fam(' q ',' q ',' int | 'inf' ',' expr ')'
    scale  := q | 'sqrt(' q ')'

Words print as ``<N^1 | Q^1@1/4, Q2^4@1{1,1/2;inf} | 3 | stable>``: base and
letters carry squared scales, a letter is ``body^c@t`` and a family appends
``{c_ratio,t_ratio;count}``.  A baseless word uses ``-`` for the base.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError
from .expr import (FGF, DirectSum, FreeProduct, GeometricFamily, Hyperfinite,
                   Matrix, Opaque, Rescale, ScaledProduct, C, H, R)
from .fclass import FNormalForm, nf_to_expr, normalize_fclass
from .scalars import INF, fmt, scale_text
from .words import Base, Letter, Word

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|([()\[\],:*/<>|^@{};\-#=]))")
_RESERVED_TERMS = {"fam", "sqrt", "inf"}


def _tokenize(text: str, start: int = 0) -> list:
    out, pos = [], start
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = "num" if m.group(1) else "ident" if m.group(2) else "punct"
        out.append((kind, m.group(m.lastindex), m.start(m.lastindex)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, start: int = 0):
        self.text = text
        self.toks = _tokenize(text, start)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, message: str, tok=None):
        tok = tok or self.tok
        found = "end of input" if tok[0] == "end" else repr(tok[1])
        return ParseError(f"{message}, found {found}", self.text, tok[2])

    def at(self, text: str) -> bool:
        return self.tok[0] != "end" and self.tok[1] == text

    def take(self, text: str):
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        self.i += 1

    def integer(self) -> int:
        if self.tok[0] != "num":
            raise self.error("expected an integer")
        value = int(self.tok[1])
        self.i += 1
        return value

    def rational(self, signed: bool = False) -> Fraction:
        sign = 1
        if signed and self.at("-"):
            self.i += 1
            sign = -1
        start = self.tok
        p = self.integer()
        q = 1
        if self.at("/"):
            self.i += 1
            q = self.integer()
            if q == 0:
                raise ParseError("zero denominator", self.text, start[2])
        return sign * Fraction(p, q)

    def rational_or_inf(self, signed: bool = False):
        if self.at("inf"):
            self.i += 1
            return INF
        return self.rational(signed)

    def count(self):
        if self.at("inf"):
            self.i += 1
            return INF
        return self.integer()

    def scale(self) -> Fraction:
        """A scale ``t``; returns ``t**2``."""
        if self.at("sqrt"):
            self.i += 1
            self.take("(")
            sq = self.rational()
            self.take(")")
            return sq
        return self.rational() ** 2

    def expr(self):
        terms = [self.term()]
        while self.at("*"):
            self.i += 1
            terms.append(self.term())
        return terms[0] if len(terms) == 1 else FreeProduct(tuple(terms))

    def term(self):
        tok = self.tok
        if self.at("("):
            self.i += 1
            e = self.expr()
            self.take(")")
            return e
        if tok[0] != "ident":
            raise self.error("expected an expression")
        name = tok[1]
        self.i += 1
        if name == "LF":
            self.take("(")
            r = self.rational_or_inf()
            self.take(")")
            return FGF(r)
        if name == "M":
            self.take("(")
            n = self.integer()
            self.take(")")
            return Matrix(n)
        if name in ("C", "H", "R"):
            return {"C": C, "H": H, "R": R}[name]
        if name == "dsum":
            self.take("(")
            terms = [self.summand()]
            while self.at(","):
                self.i += 1
                terms.append(self.summand())
            self.take(")")
            return DirectSum(tuple(terms))
        if name == "scale":
            self.take("(")
            body = self.expr()
            self.take(",")
            sq = self.scale()
            self.take(")")
            return Rescale(body, sq)
        if name == "sub":
            self.take("(")
            base = self.expr()
            letters = []
            while self.at(","):
                self.i += 1
                letters.append(self.letter())
            if not letters:
                raise self.error("sub(...) needs at least one letter")
            self.take(")")
            return ScaledProduct(base, tuple(letters))
        if name in _RESERVED_TERMS:
            raise self.error(f"reserved word {name!r} is not an expression", tok)
        return Opaque(name)

    def summand(self):
        w = self.rational()
        self.take(":")
        return (w, self.expr())

    def letter(self):
        if self.at("["):
            self.i += 1
            sq = self.scale()
            self.take(",")
            body = self.expr()
            self.take("]")
            return (sq, body)
        if self.at("fam"):
            self.i += 1
            self.take("(")
            first = self.rational()
            self.take(",")
            ratio = self.rational()
            self.take(",")
            count = self.count()
            self.take(",")
            body = self.expr()
            self.take(")")
            return GeometricFamily(first, ratio, count, body)
        raise self.error("expected a letter '[t, Q]' or 'fam(...)'")

    def word(self) -> Word:
        self.take("<")
        if self.at("-"):
            self.i += 1
            base = None
        else:
            body = self.term()
            self.take("^")
            sq = self.rational()
            if isinstance(body, Opaque):
                base = Base(body.name, sq)
            else:
                base = Base(normalize_fclass(body), sq)
        self.take("|")
        letters = []
        if not self.at("|"):
            letters.append(self.word_letter())
            while self.at(","):
                self.i += 1
                letters.append(self.word_letter())
        self.take("|")
        tail = self.rational_or_inf(signed=True)
        stable = False
        if self.at("|"):
            self.i += 1
            if not self.at("stable"):
                raise self.error("expected 'stable'")
            self.i += 1
            stable = True
        self.take(">")
        return Word(base, tuple(letters), tail, stable)

    def word_letter(self) -> Letter:
        if self.tok[0] != "ident":
            raise self.error("expected a letter symbol")
        body = self.tok[1]
        self.i += 1
        self.take("^")
        c = self.rational()
        self.take("@")
        t = self.rational()
        if not self.at("{"):
            return Letter(body, c, t)
        self.i += 1
        cr = self.rational()
        self.take(",")
        tr = self.rational()
        self.take(";")
        count = self.count()
        self.take("}")
        return Letter(body, c, t, count, cr, tr)

    def end(self):
        if self.tok[0] != "end":
            raise self.error("unexpected trailing input")


def parse(text: str):
    p = _Parser(text)
    e = p.expr()
    p.end()
    return e


def parse_prefix(text: str, start: int = 0):
    """Parse one expression at ``start``; return it with the offset where it ends."""
    p = _Parser(text, start)
    e = p.expr()
    return e, p.tok[2]


def parse_scale(text: str) -> Fraction:
    p = _Parser(text)
    first = p.tok
    sq = p.scale()
    p.end()
    if sq <= 0:
        raise p.error("scale must be positive", first)
    return sq


def parse_word(text: str) -> Word:
    p = _Parser(text)
    w = p.word()
    p.end()
    return w


def parse_form(text: str):
    """Inverse of :func:`print_form`."""
    if text.lstrip().startswith("<"):
        return parse_word(text)
    return normalize_fclass(parse(text))


def print_expr(e) -> str:
    if isinstance(e, FGF):
        return f"LF({fmt(e.r)})"
    if isinstance(e, Hyperfinite):
        return "R" if e.factor else "H"
    if isinstance(e, Matrix):
        return "C" if e.n == 1 else f"M({e.n})"
    if isinstance(e, Opaque):
        return e.name
    if isinstance(e, DirectSum):
        return "dsum(" + ", ".join(f"{w}: {print_expr(x)}" for w, x in e.terms) + ")"
    if isinstance(e, FreeProduct):
        return " * ".join(f"({print_expr(x)})" if isinstance(x, FreeProduct)
                          else print_expr(x) for x in e.factors)
    if isinstance(e, Rescale):
        return f"scale({print_expr(e.body)}, {scale_text(e.sq)})"
    if isinstance(e, ScaledProduct):
        return f"sub({print_expr(e.base)}, " + ", ".join(
            _print_letter(x) for x in e.letters) + ")"
    if isinstance(e, GeometricFamily):
        return _print_letter(e)
    raise TypeError(f"cannot print {type(e).__name__}")


def _print_letter(item) -> str:
    if isinstance(item, GeometricFamily):
        return (f"fam({item.first_sq}, {item.ratio}, {fmt(item.count)}, "
                f"{print_expr(item.body)})")
    sq, body = item
    return f"[{scale_text(sq)}, {print_expr(body)}]"


def print_word(w: Word) -> str:
    if w.base is None:
        base = "-"
    else:
        body = w.base.body
        text = print_expr(nf_to_expr(body)) if isinstance(body, FNormalForm) else body
        base = f"{text}^{fmt(w.base.sq)}"
    letters = ", ".join(_word_letter(x) for x in w.letters)
    stable = " | stable" if w.stable else ""
    return f"<{base} | {letters} | {fmt(w.tail)}{stable}>"


def _word_letter(x: Letter) -> str:
    text = f"{x.body}^{fmt(x.c_sq)}@{fmt(x.t_sq)}"
    if x.is_family:
        text += f"{{{fmt(x.c_ratio)},{fmt(x.t_ratio)};{fmt(x.count)}}}"
    return text


def print_form(f) -> str:
    if isinstance(f, FNormalForm):
        return print_expr(nf_to_expr(f))
    return print_word(f)


__all__ = ["parse", "parse_prefix", "parse_scale", "parse_word", "parse_form",
           "print_expr", "print_word", "print_form"]
