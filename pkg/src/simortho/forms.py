"""Symmetric bilinear forms, their radicals, restrictions and quotients."""

from .errors import NotInRadical, NotSymmetric
from .fields import FieldValue
from .linalg import Matrix, Subspace, kernel


class BilinearForm:
    """A symmetric bilinear form given by its Gram matrix."""

    __slots__ = ("gram",)

    def __init__(self, gram):
        if not isinstance(gram, Matrix):
            raise TypeError("BilinearForm expects a Matrix")
        if not gram.is_symmetric():
            raise NotSymmetric("Gram matrix is not symmetric")
        self.gram = gram

    @classmethod
    def from_rows(cls, field, rows):
        return cls(Matrix(field, rows))

    @property
    def field(self):
        return self.gram.field

    @property
    def dim(self):
        return self.gram.nrows

    def evaluate(self, x, y):
        F = self.field
        x = [F.coerce(a) for a in x]
        y = [F.coerce(a) for a in y]
        return FieldValue(F, _pair(self.gram, x, y))

    def is_nondegenerate(self):
        return radical(self).is_zero()

    def __eq__(self, other):
        return isinstance(other, BilinearForm) and self.gram == other.gram

    def __hash__(self):
        return hash(self.gram)

    def __repr__(self):
        return f"BilinearForm({self.gram.to_strings()}, field={self.field!r})"


def _pair(gram, x, y):
    F = gram.field
    gy = gram.apply(y)
    acc = F.zero
    for a, b in zip(x, gy):
        if not F.is_zero(a) and not F.is_zero(b):
            acc = F.add(acc, F.mul(a, b))
    return acc


def pair(gram, x, y):
    """Raw ``x^T G y``."""
    return _pair(gram, x, y)


def gram_on(gram, vectors):
    """Gram matrix of ``gram`` on a list of raw vectors."""
    F = gram.field
    images = [gram.apply(v) for v in vectors]
    rows = []
    for u in vectors:
        row = []
        for gv in images:
            acc = F.zero
            for a, b in zip(u, gv):
                if not F.is_zero(a) and not F.is_zero(b):
                    acc = F.add(acc, F.mul(a, b))
            row.append(acc)
        rows.append(tuple(row))
    return Matrix._make(F, tuple(rows), len(vectors))


def radical(f):
    """``{x : <x, V> = 0}``, i.e. the kernel of the Gram matrix."""
    return kernel(f.gram)


def restrict(f, s):
    """Form restricted to ``s``, in the canonical basis of ``s``."""
    return BilinearForm(gram_on(f.gram, list(s.basis)))


def is_alternating(f):
    """True iff every vector is isotropic.

    A zero diagonal already forces this in characteristic 2; elsewhere it
    forces the whole form to vanish by polarization.
    """
    g = f.gram
    F = f.field
    if any(not F.is_zero(g.rows[i][i]) for i in range(g.nrows)):
        return False
    return F.char == 2 or g.is_zero()


class QuotientForm:
    """The form induced on ``V / killed`` where ``killed`` lies in the radical.

    ``section`` has as columns the standard vectors at the non-pivot
    coordinates of ``killed``; they span a complement ``W`` and ``gram_q`` is
    the Gram matrix on them.
    """

    __slots__ = ("base", "killed", "section", "gram_q", "coords")

    def __init__(self, base, killed):
        if killed.ambient != base.dim or killed.field != base.field:
            raise ValueError("subspace does not live in the form's space")
        for v in killed.basis:
            if any(not base.field.is_zero(a) for a in base.gram.apply(v)):
                raise NotInRadical("subspace is not contained in the radical")
        self.base = base
        self.killed = killed
        self.coords = killed.complement_indices()
        self.section = killed.section()
        self.gram_q = BilinearForm(base.gram.select_rows(self.coords)
                                   .select_columns(self.coords))

    @property
    def dim(self):
        return len(self.coords)

    def project(self, x):
        """Coordinates in the section basis of the class of ``x``.

        Subtract the ``killed`` component (read off at the pivots) and keep the
        non-pivot coordinates.
        """
        F = self.base.field
        x = [F.coerce(a) for a in x]
        for p, b in zip(self.killed.pivots, self.killed.basis):
            c = x[p]
            if not F.is_zero(c):
                x = [F.sub(a, F.mul(c, bb)) for a, bb in zip(x, b)]
        return tuple(x[i] for i in self.coords)

    def lift(self, y):
        """Section applied to quotient coordinates."""
        F = self.base.field
        out = [F.zero] * self.base.dim
        for i, c in zip(self.coords, y):
            out[i] = c
        return tuple(out)


def quotient_by(f, s):
    return QuotientForm(f, s)
