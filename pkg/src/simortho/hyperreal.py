"""Hyperreal fragment: rational functions in ``t`` read as sequences ``i -> value(i)``.

Q(t) ordered at +infinity embeds in an ultrapower of Q: a value is finite
when its degree (numerator minus denominator) is at most 0, infinitesimal
when it is negative, and its standard part is the limit as ``t`` grows.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import ratfunc as rf
from .errors import CertificateNotConstant, InternalDisagreement, UnboundedFamily
from .fields import QQ, QQt, FieldValue
from .forms import BilinearForm
from .linalg import Matrix, Subspace, kernel


@dataclass(frozen=True)
class HyperClass:
    finite: bool
    infinitesimal: bool
    st: Optional[Fraction]  # None when unbounded

    @property
    def unbounded(self):
        return not self.finite


def _raw(x):
    if isinstance(x, FieldValue):
        if x.field != QQt:
            raise TypeError("expected a Q(t) value")
        return x.raw
    return QQt.coerce(x)


def hyper_classify(x):
    r = _raw(x)
    if not r:
        return HyperClass(True, True, Fraction(0))
    d = r.degree
    if d > 0:
        return HyperClass(False, False, None)
    if d < 0:
        return HyperClass(True, True, Fraction(0))
    return HyperClass(True, False, r.leading_ratio())


def sign(x):
    """Eventual sign of ``x(i)`` for large ``i``."""
    r = _raw(x)
    if not r:
        return 0
    return 1 if r.leading_ratio() > 0 else -1


def st(x):
    c = hyper_classify(x)
    if not c.finite:
        raise UnboundedFamily(f"{_raw(x)} is not finite")
    return c.st


class HyperFamily:
    """The family ``i -> G(i)`` for a symmetric Gram matrix over Q(t)."""

    __slots__ = ("gram_t",)

    def __init__(self, gram_t):
        if gram_t.field != QQt:
            raise TypeError("HyperFamily needs a Gram matrix over Q(t)")
        BilinearForm(gram_t)  # symmetry check
        self.gram_t = gram_t

    @property
    def dim(self):
        return self.gram_t.nrows

    def form(self):
        return BilinearForm(self.gram_t)

    def at(self, i):
        """Gram matrix at integer index ``i`` (must avoid poles)."""
        return Matrix(QQ, [[a(i) for a in r] for r in self.gram_t.rows])


@dataclass(frozen=True)
class StForm:
    gram_st: Matrix

    def form(self):
        return BilinearForm(self.gram_st)


def is_bounded_family(f):
    return all(hyper_classify(a).finite for r in f.gram_t.rows for a in r)


def st_form(f):
    if not is_bounded_family(f):
        raise UnboundedFamily("some Gram entry is not finite")
    return StForm(f.gram_t.map(QQ, lambda a: hyper_classify(a).st))


def _negligible_direct(f):
    """Constant vectors ``x`` with every entry of ``x^T G`` infinitesimal.

    For column ``k`` put everything over the lcm ``L`` of its denominators;
    ``sum_j x_j G_jk`` is infinitesimal iff the numerator
    ``sum_j x_j (G_jk L)`` has degree below ``deg L``. Each coefficient at or
    above that degree is a linear condition on ``x``.
    """
    n = f.dim
    constraints = []
    for k in range(n):
        col = [f.gram_t.rows[j][k] for j in range(n)]
        lcm_den = (1,)
        for a in col:
            g = rf.poly_gcd(lcm_den, a.den)
            lcm_den = rf.exact_div(rf.mul(lcm_den, a.den), g)
        dl = rf.deg(lcm_den)
        nums = [rf.mul(a.num, rf.exact_div(lcm_den, a.den)) if a else () for a in col]
        top = max((rf.deg(p) for p in nums if p), default=-1)
        for e in range(dl, top + 1):
            constraints.append([Fraction(p[e]) if e < len(p) else Fraction(0) for p in nums])
    if not constraints:
        return Subspace.full(QQ, n)
    return kernel(Matrix(QQ, constraints, n))


def negligible_subspace(f):
    """Negligible vectors, computed as the st-form radical and directly; both must agree."""
    via_st = kernel(st_form(f).gram_st)
    direct = _negligible_direct(f)
    if via_st != direct:
        raise InternalDisagreement("negligible subspace differs between the two computations")
    return via_st


def is_robust(f):
    return negligible_subspace(f).is_zero()


@dataclass
class WweReport:
    negligible_is_st_radical: bool
    robust: bool
    st_nondegenerate: bool
    robust_implies_nondegenerate: bool
    certificate_diagonalizes_st: Optional[bool] = None
    enlarged_implies_family: Optional[bool] = None
    negligible: Optional[Subspace] = None

    @property
    def ok(self):
        return (self.negligible_is_st_radical and self.robust_implies_nondegenerate
                and self.certificate_diagonalizes_st is not False
                and self.enlarged_implies_family is not False)

    def as_dict(self):
        return {"negligible_is_st_radical": self.negligible_is_st_radical,
                "robust": self.robust, "st_nondegenerate": self.st_nondegenerate,
                "robust_implies_nondegenerate": self.robust_implies_nondegenerate,
                "certificate_diagonalizes_st": self.certificate_diagonalizes_st,
                "enlarged_implies_family": self.enlarged_implies_family}


def constant_basis(basis):
    """The Q matrix of a Q(t) basis whose entries are all constants."""
    if basis.field == QQ:
        return basis
    if any(not a.is_constant() for r in basis.rows for a in r):
        raise CertificateNotConstant("certificate basis depends on t")
    return basis.map(QQ, lambda a: a.as_fraction())


def check_wwe(f, certificate=None):
    """Check the st-form statements on ``f`` and, optionally, a constant certificate.

    (i) negligible vectors form the st-form radical; (ii) robustness gives a
    nondegenerate st-form; (iii) a constant basis diagonalizing the family
    diagonalizes the st-form as well; (iv) a basis diagonalizing both the
    family and the st-form diagonalizes the family.
    """
    sf = st_form(f)
    rad_st = kernel(sf.gram_st)
    neg = _negligible_direct(f)
    item_i = neg == rad_st
    robust = neg.is_zero()
    nondeg = rad_st.is_zero()
    report = WweReport(item_i, robust, nondeg, (not robust) or nondeg, negligible=neg)
    if certificate is not None:
        basis = getattr(certificate, "basis", certificate)
        bq = constant_basis(basis)
        bt = bq.map(QQt, rf.RatFunc.constant)
        if not (bt.T @ f.gram_t @ bt).is_diagonal():
            raise ValueError("certificate does not diagonalize the family")
        st_diag = (bq.T @ sf.gram_st @ bq).is_diagonal()
        report.certificate_diagonalizes_st = st_diag
        # a basis diagonalizing {family, st-form} diagonalizes the family
        # member of that enlarged family; replayed on the same Gram matrix
        report.enlarged_implies_family = (not st_diag) or (bt.T @ f.gram_t @ bt).is_diagonal()
    return report


def random_bounded_family(rng, dim, max_degree=3):
    """Random symmetric Q(t) Gram matrix with every entry finite.

    Half the time the entries are independent; otherwise a constant part of
    random rank is perturbed by infinitesimals, which makes nonzero
    negligible subspaces common.
    """
    rows = [[None] * dim for _ in range(dim)]
    if rng.random() < 0.5:
        for i in range(dim):
            for j in range(i, dim):
                rows[i][j] = rows[j][i] = _random_finite(rng, max_degree)
    else:
        r = rng.randint(0, dim)
        vecs = [[rng.randint(-2, 2) for _ in range(dim)] for _ in range(r)]
        signs = [rng.choice([-1, 1]) for _ in range(r)]
        for i in range(dim):
            for j in range(i, dim):
                c = sum(s * v[i] * v[j] for s, v in zip(signs, vecs))
                eps = _random_infinitesimal(rng, max_degree) if rng.random() < 0.7 \
                    else rf.RatFunc()
                rows[i][j] = rows[j][i] = rf.RatFunc.constant(c) + eps
    return HyperFamily(Matrix(QQt, rows))


def _random_poly(rng, degree, lo=-3, hi=3):
    return tuple([rng.randint(lo, hi) for _ in range(degree)]
                 + [rng.choice([-2, -1, 1, 2])])


def _random_infinitesimal(rng, max_degree):
    dd = rng.randint(1, max_degree)
    return rf.RatFunc(_random_poly(rng, rng.randint(0, dd - 1)), _random_poly(rng, dd, 0, 3))


def _random_finite(rng, max_degree):
    kind = rng.random()
    if kind < 0.25:
        return rf.RatFunc.constant(rng.randint(-2, 2))
    if kind < 0.6:
        dd = rng.randint(0, max_degree)
        return rf.RatFunc(_random_poly(rng, dd), _random_poly(rng, dd, 0, 3))
    return _random_infinitesimal(rng, max_degree)
