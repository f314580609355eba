import random

import pytest

import oracles
from simortho import io
from simortho.errors import (DegenerateBase, NotDiagonalizable, NotSimultaneouslyOrthogonalizable,
                             NotSymmetric, RadicalNotContained)
from simortho.family import FormFamily
from simortho.fields import GF, QQ, QQt
from simortho.forms import BilinearForm
from simortho.linalg import Matrix, Subspace
from simortho.oracle import Nonexistent, generate_corpus, oracle_so
from simortho.pipeline import (Disproof, Indeterminate, OrthoCertificate, check_so,
                               orthogonal_basis_of_form, orthogonalize_degenerate,
                               orthogonalize_nondegenerate, verify_certificate)
from simortho.ratfunc import RatFunc

fam = FormFamily.from_grams


def raws(values):
    return [v.raw for v in values]


def test_orthogonal_basis_examples():
    f = BilinearForm(Matrix.diag(QQ, [1, 2, 3]))
    assert orthogonal_basis_of_form(f) == Matrix.identity(QQ, 3)
    b = orthogonal_basis_of_form(BilinearForm(Matrix(QQ, [[0, 1], [1, 0]])))
    assert b == Matrix(QQ, [[1, 1], [1, -1]])
    assert b.T @ Matrix(QQ, [[0, 1], [1, 0]]) @ b == Matrix.diag(QQ, [2, -2])
    with pytest.raises(NotDiagonalizable):
        orthogonal_basis_of_form(BilinearForm(Matrix(GF(2), [[0, 1], [1, 0]])))


def test_orthogonal_basis_on_subspace():
    f = BilinearForm(Matrix(QQ, [[0, 1, 0], [1, 0, 0], [0, 0, 1]]))
    s = Subspace.span(QQ, 3, [[1, 0, 0], [0, 1, 0]])
    b = orthogonal_basis_of_form(f, s)
    assert b.shape == (3, 2)
    assert (b.T @ f.gram @ b).is_diagonal()
    assert Subspace.span(QQ, 3, b.columns()) == s


@pytest.mark.parametrize("p", [2, 3, 5])
def test_orthogonal_basis_single_forms_match_oracle(p):
    from itertools import product
    F = GF(p)
    for a, b, c in product(range(p), repeat=3):
        f = BilinearForm(Matrix(F, [[a, b], [b, c]]))
        truth = oracle_so(FormFamily([f]))
        try:
            basis = orthogonal_basis_of_form(f)
        except NotDiagonalizable:
            assert isinstance(truth, Nonexistent)
            continue
        assert (basis.T @ f.gram @ basis).is_diagonal()
        assert oracles.det_nonzero(F, basis)


def test_nondegenerate_examples():
    c = orthogonalize_nondegenerate(fam(QQ, [[[1, 0], [0, 1]], [[2, 0], [0, 3]]]))
    assert c.basis == Matrix.identity(QQ, 2)
    assert [raws(d) for d in c.diagonals] == [[1, 1], [2, 3]]
    assert [raws(rd.values) for rd in c.roots] == [[2], [3]]

    c = orthogonalize_nondegenerate(fam(QQ, [[[1, 0], [0, 1]], [[0, 1], [1, 0]]]))
    assert c.basis == Matrix(QQ, [[1, 1], [1, -1]])
    assert [raws(d) for d in c.diagonals] == [[2, 2], [2, -2]]
    assert [raws(rd.values) for rd in c.roots] == [[1], [-1]]


def test_nondegenerate_rejects_bad_input():
    with pytest.raises(NotSymmetric):
        fam(QQ, [[[1, 0], [0, 1]], [[0, 1], [0, 0]]])
    with pytest.raises(DegenerateBase):
        orthogonalize_nondegenerate(fam(QQ, [[[1, 0], [0, 0]]]))
    with pytest.raises(NotSimultaneouslyOrthogonalizable) as exc:
        orthogonalize_nondegenerate(fam(QQ, [[[0, 1], [1, 0]], [[1, 0], [0, 0]]]))
    assert exc.value.reason == "defective eigenvalue"


def test_degenerate_examples():
    c = orthogonalize_degenerate(fam(QQ, [[[1, 0], [0, 0]], [[5, 0], [0, 0]]]))
    assert c.basis == Matrix.identity(QQ, 2)
    assert [raws(d) for d in c.diagonals] == [[1, 0], [5, 0]]
    assert c.radical_tail == 1

    c = orthogonalize_degenerate(fam(QQ, [[[1, 0, 0], [0, 1, 0], [0, 0, 0]],
                                          [[0, 1, 0], [1, 0, 0], [0, 0, 0]]]))
    assert c.basis == Matrix(QQ, [[1, 1, 0], [1, -1, 0], [0, 0, 1]])
    assert c.radical_tail == 1

    with pytest.raises(RadicalNotContained):
        orthogonalize_degenerate(fam(QQ, [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]))


def test_check_so_examples():
    c = check_so(fam(QQ, [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]))
    assert isinstance(c, OrthoCertificate)
    assert c.basis == Matrix.identity(QQ, 2)
    assert c.base_index is None and raws(c.combination) == [1, 1]

    c = check_so(fam(QQ, [[[1, 0, 0], [0, 0, 0], [0, 0, 0]], [[0, 0, 0], [0, 1, 0], [0, 0, 0]]]))
    assert isinstance(c, OrthoCertificate) and c.radical_tail == 1
    assert c.radical_space() == Subspace.span(QQ, 3, [[0, 0, 1]])

    d = check_so(fam(QQ, [[[1, 0], [0, 0]], [[0, 1], [1, 0]]]))
    assert isinstance(d, Disproof)


def test_check_so_zero_family():
    c = check_so(fam(GF(3), [[[0, 0], [0, 0]]]))
    assert isinstance(c, OrthoCertificate) and c.radical_tail == 2 and c.roots == []


def test_check_so_char2():
    d = check_so(fam(GF(2), [[[0, 1], [1, 0]]]))
    assert isinstance(d, Disproof) and d.reason == "alternating residual"
    # hyperbolic plane plus an anisotropic line is diagonalizable over GF(2)
    g = [[0, 1, 0], [1, 0, 0], [0, 0, 1]]
    c = check_so(fam(GF(2), [g]))
    assert isinstance(c, OrthoCertificate)
    assert (c.basis.T @ Matrix(GF(2), g) @ c.basis).is_diagonal()


def test_check_so_identically_singular_is_disproof():
    # every combination of these forms is singular, but their radicals meet in zero
    f = fam(QQ, [[[0, 1, 0], [1, 0, 0], [0, 0, 0]], [[0, 0, 1], [0, 0, 0], [1, 0, 0]]])
    d = check_so(f)
    assert isinstance(d, Disproof) and d.reason == "identically_singular"


def test_check_so_rational_functions_indeterminate():
    t = RatFunc.t()
    g = Matrix(QQt, [[RatFunc.constant(1), 0], [0, RatFunc.constant(1)]])
    h = Matrix(QQt, [[0, t], [t, 0]])
    verdict = check_so(FormFamily([BilinearForm(g), BilinearForm(h)]))
    assert isinstance(verdict, Indeterminate) and verdict.reason == "unsupported_field"


def _diagonalized_family(cert):
    F = cert.field
    return FormFamily([BilinearForm(Matrix.diag(F, raws(d))) for d in cert.diagonals])


def _is_permutation(m):
    F = m.field
    ones = [[not F.is_zero(a) for a in r] for r in m.rows]
    return (all(sum(r) == 1 for r in ones) and all(sum(c) == 1 for c in zip(*ones))
            and all(a == F.one for r in m.rows for a in r if not F.is_zero(a)))


def test_idempotence_on_diagonal_families():
    for d in generate_corpus(9, 150, strata=["known_orthogonalizable", "common_radical"]):
        f = io.family_from_dict(d)
        cert = check_so(f)
        if not isinstance(cert, OrthoCertificate):
            continue
        again = check_so(_diagonalized_family(cert))
        assert isinstance(again, OrthoCertificate)
        assert _is_permutation(again.basis), again.basis


def test_verify_rejects_tampering():
    f = fam(QQ, [[[1, 0], [0, 1]], [[0, 1], [1, 0]]])
    cert = check_so(f)
    assert verify_certificate(f, cert).ok
    bad = OrthoCertificate(cert.field, Matrix.identity(QQ, 2), cert.diagonals, cert.roots,
                           cert.scalars, cert.radical_tail, cert.base_index, cert.combination)
    report = verify_certificate(f, bad)
    assert not report.ok and report.witness["check"] == "diagonal"
    assert report.witness["form"] == 1 and report.witness["entry"] == (0, 1)
    wrong_scalars = OrthoCertificate(cert.field, cert.basis, cert.diagonals, cert.roots,
                                     [[QQ(1), QQ(1)], [QQ(1), QQ(1)]], cert.radical_tail,
                                     cert.base_index, cert.combination)
    assert verify_certificate(f, wrong_scalars).witness == {"check": "scalars"}
    assert verify_certificate(fam(GF(3), [[[1, 0], [0, 1]]]), cert).witness == {"check": "field"}


@pytest.mark.parametrize("p", [3, 5])
def test_agreement_with_oracle_dim3(p):
    """Sampled families over GF(p) at dim 3: certificates iff the oracle finds a basis."""
    rng = random.Random(p)
    F = GF(p)
    indeterminate = 0
    samples = 300 if p == 3 else 25
    for _ in range(samples):
        grams = []
        for _ in range(rng.randint(1, 2)):
            m = [[0] * 3 for _ in range(3)]
            for i in range(3):
                for j in range(i, 3):
                    m[i][j] = m[j][i] = rng.randrange(p)
            grams.append(m)
        f = fam(F, grams)
        verdict = check_so(f)
        if isinstance(verdict, Indeterminate):
            indeterminate += 1
            continue
        truth = oracle_so(f)
        assert isinstance(verdict, OrthoCertificate) == (not isinstance(truth, Nonexistent)), grams
    assert indeterminate == 0


@pytest.mark.slow
def test_agreement_with_oracle_gf5_dim2_exhaustive():
    from itertools import product
    F = GF(5)
    forms = [[[a, b], [b, c]] for a, b, c in product(range(5), repeat=3)]
    for g, h in product(forms, repeat=2):
        f = fam(F, [g, h])
        verdict = check_so(f)
        assert not isinstance(verdict, Indeterminate)
        assert isinstance(verdict, OrthoCertificate) == (not isinstance(oracle_so(f), Nonexistent))
