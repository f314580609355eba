"""Representing operators and the joint root-space decomposition.

For a base form ``f0`` and another form ``fi`` with ``rad(f0) <= rad(fi)``,
the representing operator ``P`` satisfies ``G_i = G_0 P``. It is built on the
non-pivot complement ``W`` of ``rad(f0)`` so that it kills the radical and maps
into ``W``.
"""

from dataclasses import dataclass, field as dc_field

from .errors import NoSolution, NotSimultaneouslyDiagonalizable, RadicalNotContained
from .fields import FieldValue
from .forms import BilinearForm, gram_on, radical
from .linalg import Matrix, Subspace, char_poly, eigenspace, roots_in_field, \
    solve_matrix_equation


@dataclass(frozen=True)
class RepresentingOperator:
    matrix: Matrix
    base_form: BilinearForm
    target_index: object = None

    def check(self, target):
        """Assert the defining identities against ``target`` (a BilinearForm)."""
        g0, p = self.base_form.gram, self.matrix
        if g0 @ p != target.gram:
            raise AssertionError("G_i != G_0 P")
        if p.T @ g0 != g0 @ p:
            raise AssertionError("operator is not self-adjoint for the base form")
        F = g0.field
        for r in radical(self.base_form).basis:
            if any(not F.is_zero(a) for a in p.apply(r)):
                raise AssertionError("operator does not vanish on the base radical")


@dataclass(frozen=True)
class RootDatum:
    values: tuple
    space: Subspace

    def raw_values(self):
        return tuple(v.raw for v in self.values)


def represent(f0, fi, target_index=None):
    """Operator ``P`` with ``<x,y>_i = <Px, y>_0``, vanishing on ``rad(f0)``."""
    if f0.field != fi.field or f0.dim != fi.dim:
        raise ValueError("forms live on different spaces")
    rad0 = radical(f0)
    F = f0.field
    for r in rad0.basis:
        if any(not F.is_zero(a) for a in fi.gram.apply(r)):
            raise RadicalNotContained(target_index, [FieldValue(F, a) for a in r])
    section = rad0.section()
    try:
        q = solve_matrix_equation(f0.gram @ section, fi.gram)
    except NoSolution:
        raise RadicalNotContained(target_index) from None
    op = RepresentingOperator(section @ q, f0, target_index)
    op.check(fi)
    return op


def _matrix_of(op):
    return op.matrix if isinstance(op, RepresentingOperator) else op


def restricted_matrix(p, piece):
    """Matrix of ``p`` on the invariant subspace ``piece`` in its RREF basis.

    Returns ``None`` when ``piece`` is not ``p``-invariant.
    """
    cols = []
    for b in piece.basis:
        img = p.apply(b)
        coords = piece.coordinates(img)
        if coords is None:
            return None
        cols.append(coords)
    return Matrix.from_columns(p.field, cols, piece.dim)


def _lift(piece, sub):
    """Vectors of ``sub`` (coordinates in piece's basis) in ambient coordinates."""
    F = piece.field
    out = []
    for c in sub.basis:
        v = [F.zero] * piece.ambient
        for a, b in zip(c, piece.basis):
            if not F.is_zero(a):
                v = [F.add(x, F.mul(a, y)) for x, y in zip(v, b)]
        out.append(v)
    return Subspace.span(F, piece.ambient, out)


def _split_piece(p, piece, index):
    """Eigenspace pieces of ``p`` on ``piece`` as (value, subspace) pairs."""
    F = p.field
    c = restricted_matrix(p, piece)
    if c is None:
        raise NotSimultaneouslyDiagonalizable(
            index, piece, "piece is not invariant (operators do not commute)")
    k = piece.dim
    lam = c.rows[0][0]
    if c == Matrix.identity(F, k).scale(lam):
        return [(lam, piece)]
    roots = roots_in_field(char_poly(c))
    pieces = []
    total = 0
    for value, _mult in roots:
        sub = eigenspace(c, value)
        total += sub.dim
        pieces.append((value.raw, _lift(piece, sub)))
    if total != k:
        found = sum(m for _v, m in roots)
        reason = ("eigenvalue outside ground field" if found < k
                  else "defective eigenvalue")
        raise NotSimultaneouslyDiagonalizable(index, piece, reason)
    return pieces


def joint_root_decomposition(ops, ambient):
    """Split ``ambient`` into joint eigenspaces of all ``ops``.

    Operators are processed in the given order and pieces are kept sorted by
    their canonical subspace key, so the output is deterministic.
    """
    if ambient.is_zero():
        return []
    F = ambient.field
    pieces = [((), ambient)]
    for index, op in enumerate(ops):
        p = _matrix_of(op)
        refined = []
        for values, piece in pieces:
            for value, sub in _split_piece(p, piece, index):
                refined.append((values + (value,), sub))
        refined.sort(key=lambda vs: vs[1].sort_key())
        pieces = refined
    return [RootDatum(tuple(FieldValue(F, v) for v in values), piece)
            for values, piece in pieces]


@dataclass
class OrthogonalityReport:
    ok: bool
    scalars: list = dc_field(default_factory=list)
    witness: object = None

    def __bool__(self):
        return self.ok


def _restricted_ratio(g0, gi):
    """``c`` with ``gi == c * g0`` entrywise, or ``None``."""
    F = g0.field
    c = None
    for r0, ri in zip(g0.rows, gi.rows):
        for a, b in zip(r0, ri):
            if not F.is_zero(a):
                c = F.div(b, a)
                break
        if c is not None:
            break
    if c is None:
        c = F.zero
    return c if g0.scale(c) == gi else None


def verify_pairwise_orthogonality(roots, forms, base=None):
    """Check that distinct root spaces are orthogonal under every form.

    ``forms`` is a list of BilinearForm (or a FormFamily); ``base`` is the form
    the scalars are measured against (default: the first form). On success the
    report carries ``scalars[i][a]`` with ``f_i|V_a = c * base|V_a``.
    """
    forms = list(getattr(forms, "members", forms))
    base = base if base is not None else forms[0]
    for i, f in enumerate(forms):
        for a in range(len(roots)):
            for b in range(a + 1, len(roots)):
                for u in roots[a].space.basis:
                    gu = f.gram.apply(u)
                    for w in roots[b].space.basis:
                        acc = f.field.zero
                        for x, y in zip(gu, w):
                            acc = f.field.add(acc, f.field.mul(x, y))
                        if not f.field.is_zero(acc):
                            F = f.field
                            return OrthogonalityReport(False, witness={
                                "form": i, "roots": [a, b],
                                "vectors": [[FieldValue(F, x) for x in u],
                                            [FieldValue(F, x) for x in w]],
                                "value": FieldValue(F, acc)})
    scalars = []
    for i, f in enumerate(forms):
        row = []
        for a, rd in enumerate(roots):
            vecs = list(rd.space.basis)
            c = _restricted_ratio(gram_on(base.gram, vecs), gram_on(f.gram, vecs))
            if c is None:
                return OrthogonalityReport(False, witness={
                    "form": i, "roots": [a], "reason": "restriction not proportional"})
            row.append(FieldValue(f.field, c))
        scalars.append(row)
    return OrthogonalityReport(True, scalars)
