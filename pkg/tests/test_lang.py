from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from factorcalc.errors import ParseError
from factorcalc.expr import (FGF, C, DirectSum, FreeProduct, GeometricFamily, Opaque,
                             ScaledProduct)
from factorcalc.lang import parse, parse_form, parse_scale, parse_word, print_expr, print_form
from factorcalc.oracle import Gen, GenConfig
from factorcalc.scalars import INF
from factorcalc.words import canonicalize_word


def test_parse_examples():
    assert parse("dsum(1/2: LF(2), 1/2: C) * LF(4)") == FreeProduct(
        (DirectSum(((F(1, 2), FGF(F(2))), (F(1, 2), C))), FGF(F(4))))
    assert parse("sub(N, [sqrt(1/4), Q])") == ScaledProduct(Opaque("N"), ((F(1, 4), Opaque("Q")),))
    assert parse("sub(LF(2), fam(1/2, 1/2, inf, LF(2)))") == ScaledProduct(
        FGF(F(2)), (GeometricFamily(F(1, 2), F(1, 2), INF, FGF(F(2))),))


def test_print_examples():
    assert print_expr(ScaledProduct(Opaque("N"), ((F(1, 4), Opaque("Q")),))) == "sub(N, [1/2, Q])"
    assert print_expr(ScaledProduct(Opaque("N"), ((F(1, 2), Opaque("Q")),))) == "sub(N, [sqrt(1/2), Q])"
    assert print_expr(FGF(F(5))) == "LF(5)"
    assert print_expr(FGF(INF)) == "LF(inf)"


def test_nested_free_products_keep_their_grouping():
    e = FreeProduct((Opaque("A"), FreeProduct((Opaque("B"), Opaque("C1")))))
    assert parse(print_expr(e)) == e


def test_scales():
    assert parse_scale("1/2") == F(1, 4)
    assert parse_scale("sqrt(2/3)") == F(2, 3)
    with pytest.raises(ParseError):
        parse_scale("0")


def test_diagnostics_carry_positions():
    with pytest.raises(ParseError) as info:
        parse("dsum(1/2: C")
    assert info.value.column == 12
    with pytest.raises(ParseError) as info:
        parse("LF(2) *\n M(")
    assert info.value.line == 2


def test_unknown_identifiers_are_opaque():
    assert parse("Foo * Bar") == FreeProduct((Opaque("Foo"), Opaque("Bar")))


def test_word_text_round_trip():
    for text in ("<N^1 | Q^1@1/4, Q2^4@1{1,1/2;inf} | 3 | stable>",
                 "<- | Q1^1/4@1, Q2^1/4@1 | 3>", "<N^1/4 | Q^1@1 | inf>"):
        assert print_form(parse_word(text)) == text


def test_form_text_round_trip():
    for text in ("LF(5)", "dsum(2/3: H, 1/3: C)", "<N^1 | Q^4@1 | 1/4>"):
        assert print_form(parse_form(text)) == text


@settings(max_examples=300)
@given(st.integers(0, 10**6))
def test_expression_round_trip(seed):
    g = Gen(GenConfig(seed=seed))
    for e in (g.fclass_expr(), g.word_expr()):
        assert parse(print_expr(e)) == e


@settings(max_examples=200)
@given(st.integers(0, 10**6))
def test_word_round_trip(seed):
    w = canonicalize_word(Gen(GenConfig(seed=seed)).word())
    assert parse_word(print_form(w)) == w
