from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from factorcalc.errors import IllFormed, NotLicensed, PreconditionViolated, UnsupportedCase
from factorcalc.expr import (COLLAPSED, FGF, AssumptionSet, FreeProduct, GeometricFamily,
                             Opaque, Rescale, ScaledProduct)
from factorcalc.fclass import normalize_fclass
from factorcalc.oracle import Gen, GenConfig, closed_form_tail, folded_tail
from factorcalc.scalars import INF
from factorcalc.words import (Base, Letter, Word, absorb_license, absorb_stable,
                              canonicalize_word, ext_tail, rescale_word, rho, trade_step,
                              trade_to_target, word_of)

N = Base("N")


def w(*letters, tail=F(0), base=N):
    return Word(base, tuple(Letter(b, F(c), F(t)) for b, c, t in letters), F(tail))


def test_word_of_scaled_product():
    assert word_of(ScaledProduct(Opaque("N"), ((F(1, 4), Opaque("Q")),))) == w(("Q", 1, "1/4"))
    assert word_of(ScaledProduct(Opaque("N"), ((F(1), Opaque("Q")),))) == w(("Q", 1, 1))


def test_extended_view_tail():
    x = w(("Q", 1, "1/4"))
    assert ext_tail(x) == F(-3, 4)
    assert ext_tail(x) > 1 - 2


def test_geometric_family_folds_into_lf4():
    e = ScaledProduct(FGF(F(2)), (GeometricFamily(F(1, 2), F(1, 2), INF, FGF(F(2))),))
    assert word_of(e) == normalize_fclass(FGF(F(4)))


def test_rescale_of_baseless_product():
    out = word_of(Rescale(FreeProduct((Opaque("Q1"), Opaque("Q2"))), F(1, 4)))
    assert out == w(("Q1", "1/4", 1), ("Q2", "1/4", 1), tail=3, base=None)


def test_rescale_word_examples():
    assert rescale_word(w(("Q", 1, "1/4"), tail=1), F(1, 4)) == w(("Q", 1, 1), tail=4,
                                                                     base=Base("N", F(1, 4)))
    x = canonicalize_word(w(("Q", 1, "1/4"), tail=1))
    assert rescale_word(x, F(1)) == x


def test_trade_step_examples():
    x = w(("Q", 1, "1/4"), tail=1)
    assert trade_step(x, 0, F(9, 16)) == w(("Q", "9/4", "9/16"), tail="11/16")
    assert trade_step(x, 0, F(1, 4)) == x
    with pytest.raises(PreconditionViolated) as info:
        trade_step(w(("Q", 1, "1/4")), 0, F(1))
    assert info.value.deficit == F(3, 4)


def test_trade_to_target_examples():
    x = w(("Q1", 1, "1/4"), ("Q2", 1, "1/4"), tail="1/2")
    out = trade_to_target(x, {0: F(9, 16), 1: F(1, 4)})
    assert out.tail == F(3, 16)
    assert out.letters[0] == Letter("Q1", F(9, 4), F(9, 16))
    assert trade_to_target(x, {0: F(1, 4), 1: F(1, 4)}) == x
    with pytest.raises(PreconditionViolated) as info:
        trade_to_target(x, {0: F(1), 1: F(1)})
    assert info.value.deficit == 1


def test_trades_are_refused_where_they_make_no_sense():
    with pytest.raises(PreconditionViolated):
        trade_step(w(("Q", 1, 1), base=None), 0, F(1, 4))
    with pytest.raises(PreconditionViolated):
        trade_step(w(("Q", 1, 1), tail=1), 3, F(1, 4))


def test_canonicalize_examples():
    # rho = 11/16 + 9/16 = 5/4, so lifting the letter to 1 leaves tail 1/4
    assert canonicalize_word(w(("Q", "9/4", "9/16"), tail="11/16")) == w(("Q", 4, 1), tail="1/4")
    x = w(("Q", 1, "1/4"), ("Q", 1, "1/4"))
    assert canonicalize_word(x) == x
    c = canonicalize_word(w(("Q", 1, "1/4"), tail=1))
    assert canonicalize_word(c) == c


def test_canonicalize_desugars_large_support():
    assert canonicalize_word(w(("Q", 4, 4))) == w(("Q", 1, 1), tail=3)


def test_canonicalize_partial_lift():
    # rho = 3/2 over three letters: lift the first, the other two share 1/4 each
    out = canonicalize_word(w(("A", 1, "1/2"), ("B", 1, "1/2"), ("C", 1, "1/2")))
    assert out == w(("A", 2, 1), ("B", "1/2", "1/4"), ("C", "1/2", "1/4"))


def test_absorb_examples():
    stable = AssumptionSet().assume_stable("Q")
    out = absorb_stable(w(("Q", 1, "1/4")), stable)
    assert out == Word(N, (Letter("Q", F(4), F(1)),), F(0), True)
    fam = Word(N, (Letter("Q", F(1), F(1, 4), INF),), F(0))
    assert absorb_license(fam, AssumptionSet()) is not None
    lifted = absorb_stable(fam, AssumptionSet())
    assert lifted.letters == (Letter("Q", F(4), F(1), INF),) and lifted.stable
    with pytest.raises(NotLicensed):
        absorb_stable(w(("Q", 1, "1/4"), tail=5), AssumptionSet())


def test_absorb_licenses():
    conv = Word(N, (Letter("Q", F(1), F(1, 4), INF, F(1, 2), F(1, 2)),), F(0))
    assert absorb_license(conv, AssumptionSet()) is None
    assert absorb_license(conv, AssumptionSet().with_mode(COLLAPSED)) is not None
    assert absorb_license(Word(N, conv.letters, INF), AssumptionSet()) is not None


def test_partition_invariance():
    q = [(F(1, 4), Opaque("Q1")), (F(1, 9), Opaque("Q2")), (F(1, 2), Opaque("Q3"))]
    flat = ScaledProduct(Opaque("N"), tuple(q))
    nested = ScaledProduct(ScaledProduct(Opaque("N"), tuple(q[:1])), tuple(q[1:]))
    assert word_of(flat) == word_of(nested)


def test_compound_family_bodies_are_unsupported():
    fam = GeometricFamily(F(1, 2), F(1, 2), INF, FreeProduct((Opaque("Q"), Opaque("P"))))
    with pytest.raises((UnsupportedCase, IllFormed)):
        word_of(ScaledProduct(Opaque("N"), (fam,)))


def _words():
    return st.integers(0, 10**6).map(lambda s: Gen(GenConfig(seed=s)).word())


@settings(max_examples=200)
@given(_words())
def test_canonicalize_conserves_invariants(x):
    c = canonicalize_word(x)
    assert rho(c) == rho(x)
    assert sorted(l.key for l in c.letters) == sorted(l.key for l in x.letters)
    assert c.base == x.base and c.tail >= 0
    assert canonicalize_word(c) == c


@settings(max_examples=200)
@given(_words(), st.fractions(F(1, 9), 9, max_denominator=9), st.fractions(F(1, 9), 9, max_denominator=9))
def test_rescale_laws(x, s, t):
    c = canonicalize_word(x)
    assert rescale_word(rescale_word(c, s), t) == rescale_word(c, s * t)
    assert rho(rescale_word(c, s)) == rho(c) / s


@settings(max_examples=200)
@given(st.integers(0, 10**6))
def test_chain_matches_closed_form(seed):
    x = Gen(GenConfig(seed=seed)).word(tail=F(0))
    assert closed_form_tail(x) == folded_tail(x)
