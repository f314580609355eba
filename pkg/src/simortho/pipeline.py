"""Simultaneous orthogonalization: pipelines, certificates and the decision procedure.

Strategy of :func:`check_so`: quotient the family by its common radical, take
a nondegenerate member (or a nondegenerate linear combination) as base form,
represent every member by a self-adjoint operator relative to it, split the
space into joint eigenspaces, orthogonalize the base form inside each one and
lift back, appending a basis of the common radical at the end.
"""

from dataclasses import dataclass, field as dc_field
from typing import Optional

from .errors import (DegenerateBase, InternalDisagreement, NotDiagonalizable,
                     NotFound, NotSimultaneouslyDiagonalizable,
                     NotSimultaneouslyOrthogonalizable, RadicalNotContained,
                     UnsupportedField)
from .family import (DEFAULT_COMBINATION_BUDGET, FormFamily, combine,
                     family_radical, nondegenerate_combination)
from .fields import FieldValue
from .forms import BilinearForm, QuotientForm, gram_on, pair, radical
from .linalg import Matrix, Subspace, rank
from .operators import (RootDatum, joint_root_decomposition, represent,
                        verify_pairwise_orthogonality)


@dataclass
class OrthoCertificate:
    """A basis diagonalizing every member, with its root-space structure.

    ``basis`` has the new basis vectors as columns: the root blocks in order,
    then ``radical_tail`` columns spanning the radical that was quotiented out.
    ``scalars[i][a]`` satisfies ``f_i|V_a = c * base|V_a`` where the base form
    is member ``base_index`` or, if that is ``None``, the linear combination
    with coefficients ``combination``.
    """

    field: object
    basis: Matrix
    diagonals: list
    roots: list
    scalars: list
    radical_tail: int
    base_index: Optional[int] = None
    combination: Optional[list] = None

    verdict = "certificate"

    def base_form(self, family):
        if self.base_index is not None:
            return family.members[self.base_index]
        return combine(family, self.combination)

    def radical_space(self):
        n = self.basis.ncols
        cols = [self.basis.column(j) for j in range(n - self.radical_tail, n)]
        return Subspace.span(self.field, self.basis.nrows, cols)

    def block_columns(self):
        """Column index ranges of the root blocks, in order."""
        out, start = [], 0
        for rd in self.roots:
            out.append(range(start, start + rd.space.dim))
            start += rd.space.dim
        return out


@dataclass
class Disproof:
    reason: str
    witness: dict = dc_field(default_factory=dict)

    verdict = "disproved"


@dataclass
class Indeterminate:
    reason: str
    detail: dict = dc_field(default_factory=dict)

    verdict = "indeterminate"


@dataclass
class VerifyReport:
    ok: bool
    witness: Optional[dict] = None

    def __bool__(self):
        return self.ok


# single form -----------------------------------------------------------------

def _normalize(F, v):
    """Scale so that the first nonzero coordinate is 1."""
    for a in v:
        if not F.is_zero(a):
            if a == F.one:
                return tuple(v)
            inv = F.inv(a)
            return tuple(F.mul(inv, x) for x in v)
    return tuple(v)


def _add(F, u, v):
    return tuple(F.add(a, b) for a, b in zip(u, v))


def _project_out(F, gram, vectors, v, skip):
    q = pair(gram, v, v)
    gv = gram.apply(v)
    out = []
    for idx, u in enumerate(vectors):
        if idx == skip:
            continue
        c = F.zero
        for a, b in zip(u, gv):
            if not F.is_zero(a) and not F.is_zero(b):
                c = F.add(c, F.mul(a, b))
        if not F.is_zero(c):
            c = F.div(c, q)
            u = tuple(F.sub(a, F.mul(c, b)) for a, b in zip(u, v))
        out.append(u)
    return out


def _subsets_by_size(k):
    from itertools import combinations
    for size in range(1, k + 1):
        yield from combinations(range(k), size)


def _pick_anisotropic(F, gram, vectors, h):
    """Anisotropic vector to split off next, and the index it replaces.

    Outside characteristic 2 the first anisotropic basis vector works, or
    ``u + w`` for the first pair with nonzero pairing. In characteristic 2 the
    choice must also leave a residual that is not alternating-and-nonzero, so
    candidate sums are tried in order of size.
    """
    k = len(vectors)
    if F.char != 2:
        for j in range(k):
            if not F.is_zero(h.rows[j][j]):
                return vectors[j], j
        for j in range(k):
            for l in range(j + 1, k):
                if not F.is_zero(h.rows[j][l]):
                    return _add(F, vectors[j], vectors[l]), j
        return None
    if all(F.is_zero(h.rows[j][j]) for j in range(k)):
        return None
    for subset in _subsets_by_size(k):
        v = vectors[subset[0]]
        for j in subset[1:]:
            v = _add(F, v, vectors[j])
        if F.is_zero(pair(gram, v, v)):
            continue
        rest = _project_out(F, gram, vectors, v, subset[0])
        r = gram_on(gram, rest)
        if r.is_zero() or any(not F.is_zero(r.rows[i][i]) for i in range(r.nrows)):
            return v, subset[0]
    raise InternalDisagreement("non-alternating form in characteristic 2 "
                               "without a diagonalizable split")


def _orthogonal_vectors(gram, vectors):
    F = gram.field
    rem = [tuple(v) for v in vectors]
    out = []
    while rem:
        h = gram_on(gram, rem)
        if h.is_zero():
            out.extend(_normalize(F, v) for v in rem)
            break
        choice = _pick_anisotropic(F, gram, rem, h)
        if choice is None:
            raise NotDiagonalizable(Subspace.span(F, gram.nrows, rem))
        v, j = choice
        v = _normalize(F, v)
        out.append(v)
        rem = _project_out(F, gram, rem, v, j)
    return out


def orthogonal_basis_of_form(f, s=None):
    """Basis of ``s`` (default: everything) orthogonal for ``f``, as matrix columns.

    Raises :class:`NotDiagonalizable` when the restriction is alternating and
    nonzero in characteristic 2.
    """
    if s is None:
        s = Subspace.full(f.field, f.dim)
    vecs = _orthogonal_vectors(f.gram, list(s.basis))
    return Matrix.from_columns(f.field, vecs, f.dim)


# pipelines -------------------------------------------------------------------

def _lift_subspace(qf, sub):
    return Subspace.span(qf.base.field, qf.base.dim, [qf.lift(v) for v in sub.basis])


def _run(family, killed, base_form, base_index, combination):
    """Orthogonalize ``family`` after quotienting by ``killed``.

    ``killed`` must lie in every member's radical and be exactly the radical
    of ``base_form``.
    """
    F = family.field
    qforms = [QuotientForm(m, killed) for m in family.members]
    qbase_q = QuotientForm(base_form, killed)
    qbase = qbase_q.gram_q
    if not radical(qbase).is_zero():
        raise DegenerateBase("base form is degenerate on the quotient")
    op_members = [i for i in range(len(family)) if i != base_index]
    ops = [represent(qbase, qforms[i].gram_q, i) for i in op_members]
    try:
        roots_q = joint_root_decomposition(ops, Subspace.full(F, qbase.dim))
    except NotSimultaneouslyDiagonalizable as exc:
        exc.operator = op_members[exc.operator]
        exc.piece = _lift_subspace(qbase_q, exc.piece)
        raise
    columns, roots = [], []
    for rd in roots_q:
        try:
            vecs = _orthogonal_vectors(qbase.gram, list(rd.space.basis))
        except NotDiagonalizable as exc:
            exc.residual = _lift_subspace(qbase_q, exc.residual)
            raise
        columns.extend(qbase_q.lift(v) for v in vecs)
        roots.append(RootDatum(rd.values, _lift_subspace(qbase_q, rd.space)))
    columns.extend(killed.basis)
    basis = Matrix.from_columns(F, columns, family.dim)
    if rank(basis) != family.dim:
        raise InternalDisagreement("assembled basis is singular")
    diagonals = []
    for i, m in enumerate(family.members):
        d = basis.T @ m.gram @ basis
        if not d.is_diagonal():
            raise InternalDisagreement(f"basis does not diagonalize member {i}")
        diagonals.append(d.diagonal())
    report = verify_pairwise_orthogonality(roots, family.members, base_form)
    if not report.ok:
        raise InternalDisagreement(f"root spaces not orthogonal: {report.witness}")
    # the scalars must be exactly the root values
    for k, i in enumerate(op_members):
        for a, rd in enumerate(roots):
            if report.scalars[i][a] != rd.values[k]:
                raise InternalDisagreement("restricted-form scalar differs from root value")
    return OrthoCertificate(F, basis, diagonals, roots, report.scalars, killed.dim,
                            base_index, combination)


def _wrap(exc):
    return NotSimultaneouslyOrthogonalizable(exc.reason, {
        "operator": exc.operator, "piece": exc.piece, "reason": exc.reason})


def orthogonalize_nondegenerate(family, base_index=0):
    base = family.members[base_index]
    if not radical(base).is_zero():
        raise DegenerateBase(f"member {base_index} is degenerate")
    try:
        return _run(family, Subspace.zero(family.field, family.dim), base, base_index, None)
    except NotSimultaneouslyDiagonalizable as exc:
        raise _wrap(exc) from None


def orthogonalize_degenerate(family, base_index=0):
    base = family.members[base_index]
    rad0 = radical(base)
    F = family.field
    for i, m in enumerate(family.members):
        for r in rad0.basis:
            if any(not F.is_zero(a) for a in m.gram.apply(r)):
                raise RadicalNotContained(i, [FieldValue(F, a) for a in r])
    try:
        return _run(family, rad0, base, base_index, None)
    except NotSimultaneouslyDiagonalizable as exc:
        raise _wrap(exc) from None


def check_so(family, budget=DEFAULT_COMBINATION_BUDGET):
    """Decide simultaneous orthogonalizability.

    Returns an :class:`OrthoCertificate`, a :class:`Disproof` or an
    :class:`Indeterminate`; never raises for mathematical outcomes.
    """
    F = family.field
    rad_f = family_radical(family)
    quotients = [QuotientForm(m, rad_f).gram_q for m in family.members]
    base_index = next((i for i, q in enumerate(quotients) if radical(q).is_zero()), None)
    combination = None
    if base_index is not None:
        base = family.members[base_index]
    else:
        try:
            combination = nondegenerate_combination(FormFamily(quotients), budget)
        except NotFound as exc:
            detail = {"evaluated": exc.evaluated, "grid_side": len(rad_f.complement_indices()) + 1,
                      "radical": rad_f}
            if exc.reason == "identically_singular":
                return Disproof("identically_singular", detail)
            return Indeterminate(exc.reason, detail)
        base = combine(family, combination)
    try:
        return _run(family, rad_f, base, base_index, combination)
    except NotSimultaneouslyDiagonalizable as exc:
        return Disproof(exc.reason, {"operator": exc.operator, "piece": exc.piece,
                                     "base_index": base_index, "combination": combination})
    except NotDiagonalizable as exc:
        return Disproof("alternating residual", {
            "residual": exc.residual, "gram": gram_on(base.gram, list(exc.residual.basis)),
            "base_index": base_index, "combination": combination})
    except UnsupportedField as exc:
        return Indeterminate("unsupported_field", {"message": str(exc)})


# verification ----------------------------------------------------------------

def verify_certificate(family, cert):
    """Replay every claim of ``cert`` against ``family`` exactly."""
    F = family.field
    n = family.dim
    b = cert.basis
    if cert.field != F:
        return VerifyReport(False, {"check": "field"})
    if b.shape != (n, n):
        return VerifyReport(False, {"check": "shape"})
    if rank(b) != n:
        return VerifyReport(False, {"check": "invertible"})
    if len(cert.diagonals) != len(family):
        return VerifyReport(False, {"check": "diagonals"})
    congruent = [b.T @ m.gram @ b for m in family.members]
    for i, d in enumerate(congruent):
        bad = d.off_diagonal_nonzero()
        if bad is not None:
            return VerifyReport(False, {"check": "diagonal", "form": i, "entry": bad,
                                        "value": d[bad]})
    for i, d in enumerate(congruent):
        if d.diagonal() != list(cert.diagonals[i]):
            return VerifyReport(False, {"check": "diagonal_values", "form": i})
    k = cert.radical_tail
    if not 0 <= k <= n:
        return VerifyReport(False, {"check": "radical_tail"})
    for j in range(n - k, n):
        col = b.column(j)
        for i, m in enumerate(family.members):
            if any(not F.is_zero(a) for a in m.gram.apply(col)):
                return VerifyReport(False, {"check": "radical_tail", "form": i, "column": j})
    if sum(rd.space.dim for rd in cert.roots) + k != n:
        return VerifyReport(False, {"check": "root_dimensions"})
    for a, cols in enumerate(cert.block_columns()):
        span = Subspace.span(F, n, [b.column(j) for j in cols])
        if span != cert.roots[a].space:
            return VerifyReport(False, {"check": "root_block", "root": a})
    if cert.base_index is None and cert.combination is None:
        return VerifyReport(False, {"check": "base"})
    base = cert.base_form(family)
    report = verify_pairwise_orthogonality(cert.roots, family.members, base)
    if not report.ok:
        return VerifyReport(False, {"check": "root_orthogonality", **report.witness})
    if [list(r) for r in report.scalars] != [list(r) for r in cert.scalars]:
        return VerifyReport(False, {"check": "scalars"})
    return VerifyReport(True)
