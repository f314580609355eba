import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from simortho.errors import CertificateNotConstant, UnboundedFamily
from simortho.fields import QQ, QQt
from simortho.hyperreal import (HyperFamily, _random_finite, check_wwe, hyper_classify, is_bounded_family,
                                is_robust, negligible_subspace, random_bounded_family, sign,
                                st as standard_part, st_form)
from simortho.linalg import Matrix, Subspace
from simortho.ratfunc import RatFunc

t = RatFunc.t()


def hyper(rows):
    return HyperFamily(Matrix(QQt, [[QQt.parse(a) if isinstance(a, str) else a for a in r]
                                    for r in rows]))


@pytest.mark.parametrize("text,finite,infinitesimal,st", [
    ("1/t", True, True, 0),
    ("(2*t+1)/t", True, False, 2),
    ("t^2", False, False, None),
    ("0", True, True, 0),
    ("-3", True, False, -3),
    ("(t^2-1)/(2*t^2+t)", True, False, Fraction(1, 2)),
])
def test_classify_examples(text, finite, infinitesimal, st):
    c = hyper_classify(QQt.parse(text))
    assert (c.finite, c.infinitesimal, c.st) == (finite, infinitesimal, st)
    assert c.unbounded == (not finite)


def test_sign_and_unbounded_st():
    assert sign(QQt.parse("1-t")) == -1 and sign(QQt.parse("1/t")) == 1 and sign(QQt.parse("0")) == 0
    with pytest.raises(UnboundedFamily):
        standard_part(QQt.parse("t"))


@pytest.mark.parametrize("rows,bounded", [
    ([["1", "0"], ["0", "1/t"]], True),
    ([["t", "0"], ["0", "1"]], False),
    ([["1", "(t+1)/t"], ["(t+1)/t", "3"]], True),
])
def test_bounded_examples(rows, bounded):
    assert is_bounded_family(hyper(rows)) is bounded


@pytest.mark.parametrize("rows,expected", [
    ([["1", "0"], ["0", "1/t"]], [[1, 0], [0, 0]]),
    ([["1", "(2*t+1)/t"], ["(2*t+1)/t", "1"]], [[1, 2], [2, 1]]),
])
def test_st_form_examples(rows, expected):
    assert st_form(hyper(rows)).gram_st == Matrix(QQ, expected)


def test_st_form_unbounded():
    with pytest.raises(UnboundedFamily):
        st_form(hyper([["t", "0"], ["0", "1"]]))


@pytest.mark.parametrize("rows,expected", [
    ([["1", "0"], ["0", "1/t"]], [[0, 1]]),
    ([["1", "0"], ["0", "1"]], []),
    ([["1/t", "0"], ["0", "1/t"]], [[1, 0], [0, 1]]),
    ([["1", "1"], ["1", "1+1/t"]], [[1, -1]]),
])
def test_negligible_examples(rows, expected):
    assert negligible_subspace(hyper(rows)) == Subspace.span(QQ, 2, expected)
    assert is_robust(hyper(rows)) == (not expected)


def test_wwe_examples():
    r = check_wwe(hyper([["1", "0"], ["0", "1/t"]]), Matrix.identity(QQ, 2))
    assert r.ok and r.certificate_diagonalizes_st and r.enlarged_implies_family
    assert not r.robust

    f = hyper([["0", "1"], ["1", "0"]])
    r = check_wwe(f, Matrix(QQ, [[1, 1], [1, -1]]))
    assert r.ok and r.certificate_diagonalizes_st
    assert st_form(f).gram_st == Matrix(QQ, [[0, 1], [1, 0]])

    r = check_wwe(hyper([["1", "1/t"], ["1/t", "1"]]))
    assert r.robust and r.st_nondegenerate and r.robust_implies_nondegenerate and r.ok
    assert st_form(hyper([["1", "1/t"], ["1/t", "1"]])).gram_st == Matrix.identity(QQ, 2)


def test_wwe_rejects_t_dependent_basis():
    f = hyper([["1", "0"], ["0", "1"]])
    basis = Matrix(QQt, [[RatFunc.constant(1), t], [RatFunc(), RatFunc.constant(1)]])
    with pytest.raises(CertificateNotConstant):
        check_wwe(f, basis)


def test_evaluation_matches_sequence():
    f = hyper([["(t+1)/t", "1/t^2"], ["1/t^2", "2"]])
    assert f.at(4) == Matrix(QQ, [[Fraction(5, 4), Fraction(1, 16)], [Fraction(1, 16), 2]])


def finite_ratfuncs():
    def build(num, den, shift):
        den = list(den) + [0] * shift
        if not any(den):
            den = [1]
        r = RatFunc(num, den)
        return r if (not r or r.degree <= 0) else 1 / r
    return st.builds(build, st.lists(st.integers(-4, 4), min_size=1, max_size=3),
                     st.lists(st.integers(-4, 4), min_size=1, max_size=3).filter(any),
                     st.integers(0, 2))


@settings(max_examples=300, deadline=None)
@given(x=finite_ratfuncs(), y=finite_ratfuncs())
def test_st_is_ring_morphism(x, y):
    assert hyper_classify(x).finite and hyper_classify(y).finite
    assert standard_part(x + y) == standard_part(x) + standard_part(y)
    assert standard_part(x * y) == standard_part(x) * standard_part(y)


def test_st_ring_morphism_bulk():
    rng = random.Random(0)
    for _ in range(10 ** 4):
        x, y = _random_finite(rng, 3), _random_finite(rng, 3)
        assert standard_part(x + y) == standard_part(x) + standard_part(y)
        assert standard_part(x * y) == standard_part(x) * standard_part(y)


def test_random_families_and_constant_certificates():
    rng = random.Random(3)
    for _ in range(300):
        f = random_bounded_family(rng, rng.randint(1, 4))
        assert is_bounded_family(f)
        report = check_wwe(f)
        assert report.ok
        assert report.robust == report.st_nondegenerate
    # a constant diagonalizing basis also diagonalizes the st-form
    d = hyper([["1+1/t", "0", "0"], ["0", "1/t", "0"], ["0", "0", "-2"]])
    p = Matrix(QQ, [[1, 1, 0], [0, 1, 1], [0, 0, 1]])
    pt = p.map(QQt, RatFunc.constant)
    congruent = HyperFamily(pt.T @ d.gram_t @ pt)
    report = check_wwe(congruent, Matrix(QQ, [[1, -1, 1], [0, 1, -1], [0, 0, 1]]))
    assert report.ok and report.certificate_diagonalizes_st
