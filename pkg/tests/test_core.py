from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from factorcalc.expr import (FGF, C, DirectSum, FreeProduct, GeometricFamily, H,
                             Matrix, Opaque, R, Rescale, ScaledProduct, well_formed)
from factorcalc.fdim import fdim, sum_squares
from factorcalc.errors import UndefinedFdim
from factorcalc.scalars import INF, ext, mul, rational_sqrt, scale_text

rationals = st.fractions(max_denominator=50)


@given(rationals, rationals, rationals)
def test_scalar_arithmetic_is_exact(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c


@given(st.fractions(min_value=F(1, 30), max_value=100, max_denominator=30),
       st.fractions(min_value=F(1, 30), max_value=100, max_denominator=30),
       st.fractions(min_value=F(1, 30), max_value=100, max_denominator=30))
def test_sq_scale_composition(x, s, t):
    e = Rescale(Rescale(Opaque("Q"), x * s), t)
    assert e.body.sq * e.sq == x * s * t


def test_extended_values():
    assert INF + F(3) == INF
    assert mul(F(1, 2), INF) == INF
    assert INF > F(10**9)
    with pytest.raises(ArithmeticError):
        mul(F(0), INF)
    assert ext("inf") == INF and ext("3/4") == F(3, 4)
    with pytest.raises(TypeError):
        ext(0.5)


def test_scale_text():
    assert scale_text(F(1, 4)) == "1/2"
    assert scale_text(F(1, 2)) == "sqrt(1/2)"
    assert rational_sqrt(F(9, 16)) == F(3, 4)
    assert rational_sqrt(F(2)) is None


def test_well_formed_examples():
    assert well_formed(Matrix(2)).ok
    bad = well_formed(DirectSum(((F(1, 2), Matrix(2)), (F(1, 3), Matrix(1)))))
    assert any("weights sum to 5/6 ≠ 1" in m for _, m in bad.violations)
    bad = well_formed(Rescale(DirectSum(((F(1, 2), C), (F(1, 2), C))), F(1, 4)))
    assert any("rescale base is not a factor" in m for _, m in bad.violations)


def test_well_formed_other_violations():
    assert not well_formed(FGF(F(1))).ok
    assert not well_formed(Matrix(0)).ok
    assert not well_formed(Rescale(FGF(F(2)), F(0))).ok
    assert not well_formed(ScaledProduct(Matrix(2), ((F(1, 4), Opaque("Q")),))).ok
    assert not well_formed(ScaledProduct(Opaque("N"), ((F(4), Matrix(2)),))).ok
    assert not well_formed(GeometricFamily(F(1, 2), F(1, 2), INF, Opaque("Q"))).ok
    assert not well_formed(Opaque("sub")).ok
    assert well_formed(ScaledProduct(Opaque("N"), ((F(1, 4), Matrix(2)),))).ok


def test_rescaling_non_factors_is_rejected():
    assert not well_formed(Rescale(H, F(1, 4))).ok
    assert well_formed(Rescale(R, F(1, 4))).ok


@given(st.recursive(st.sampled_from([Matrix(3), FGF(F(2)), H, C]),
                    lambda kids: st.builds(lambda a, b: FreeProduct((a, b)), kids, kids),
                    max_leaves=6))
def test_well_formed_is_total(e):
    report = well_formed(e)
    assert isinstance(report.ok, bool)
    assert well_formed(object()).violations  # never raises


def test_fdim_examples():
    assert fdim(Matrix(2)) == F(3, 4)
    assert fdim(DirectSum(((F(1, 2), FGF(F(2))), (F(1, 2), C)))) == 1
    m = FreeProduct((DirectSum(((F(1, 2), FGF(F(2))), (F(1, 2), C))), FGF(F(4))))
    assert fdim(m) == 5
    assert fdim(C) == 0
    assert fdim(DirectSum(((F(1, 3), C), (F(2, 3), C)))) == F(4, 9)
    assert fdim(FGF(INF)) == INF


def test_fdim_undefined_outside_class_f():
    for e in (Opaque("Q"), Rescale(FGF(F(2)), F(1, 4)),
              ScaledProduct(Opaque("N"), ((F(1, 4), Opaque("Q")),))):
        with pytest.raises(UndefinedFdim):
            fdim(e)


def test_sum_squares():
    assert sum_squares(GeometricFamily(F(1, 2), F(1, 2), INF, FGF(F(2)))) == 1
    assert sum_squares(GeometricFamily(F(1, 4), F(1), INF, FGF(F(2)))) == INF
    assert sum_squares(GeometricFamily(F(1, 4), F(1), 3, FGF(F(2)))) == F(3, 4)


leaves = st.one_of(st.builds(lambda n: Matrix(n), st.integers(1, 5)),
                   st.builds(lambda r: FGF(1 + r), st.fractions(F(1, 10), 10, max_denominator=10)),
                   st.just(H), st.just(R))


@given(leaves, leaves)
def test_fdim_additivity_on_expressions(a, b):
    assert fdim(FreeProduct((a, b))) == fdim(a) + fdim(b)


@given(st.lists(st.integers(1, 20), min_size=2, max_size=6))
def test_rule_iv_cross_check(parts):
    total = sum(parts)
    weights = [F(p, total) for p in parts]
    e = DirectSum(tuple((w, C) for w in weights))
    assert fdim(e) == 1 - sum(w * w for w in weights)


@given(st.lists(st.integers(1, 20), min_size=2, max_size=5), st.randoms())
def test_direct_sum_fdim_permutation_and_nesting(parts, rnd):
    total = sum(parts)
    pool = [Matrix(2), FGF(F(3)), C, H]
    terms = [(F(p, total), pool[i % 4]) for i, p in enumerate(parts)]
    shuffled = list(terms)
    rnd.shuffle(shuffled)
    assert fdim(DirectSum(tuple(terms))) == fdim(DirectSum(tuple(shuffled)))
    # merge the first two summands into a nested direct sum
    (w1, a), (w2, b), rest = terms[0], terms[1], terms[2:]
    nested = DirectSum(((w1 / (w1 + w2), a), (w2 / (w1 + w2), b)))
    if rest:
        assert fdim(DirectSum(((w1 + w2, nested),) + tuple(rest))) == fdim(DirectSum(tuple(terms)))
