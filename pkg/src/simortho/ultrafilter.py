"""Computable ultrapower models for families indexed by 1, 2, 3, ...

Two index shapes are supported. A *finite* family indexed by ``1..n`` uses the
principal ultrafilter at ``n``. A *stable-tail* family equals ``tail`` at
every index past its prefix; every evaluation sequence is then eventually
constant, so its class modulo any ultrafilter containing the cofinite sets is
the tail value. Nonprincipal choices beyond that are not representable.
"""

from dataclasses import dataclass
from typing import Optional

from .errors import ImplicationViolated
from .family import FormFamily
from .forms import BilinearForm, pair
from .linalg import Matrix, kernel


class StableTailFamily:
    """Members ``prefix[0..N-1]`` at indices ``1..N`` and ``tail`` at every index ``> N``."""

    __slots__ = ("field", "dim", "prefix", "tail")

    def __init__(self, prefix, tail):
        prefix = list(prefix)
        for m in prefix:
            if m.field != tail.field or m.dim != tail.dim:
                raise ValueError("prefix and tail live on different spaces")
        self.field = tail.field
        self.dim = tail.dim
        self.prefix = prefix
        self.tail = tail

    @property
    def cut(self):
        return len(self.prefix)

    def member(self, i):
        """Form at index ``i >= 1``."""
        if i < 1:
            raise IndexError("indices start at 1")
        return self.prefix[i - 1] if i <= self.cut else self.tail

    def extended(self, extra):
        """Same infinite family with ``extra`` copies of the tail moved into the prefix."""
        return StableTailFamily(self.prefix + [self.tail] * extra, self.tail)

    def as_form_family(self):
        """Prefix members followed by the tail, as a finite family."""
        return FormFamily(self.prefix + [self.tail])


@dataclass(frozen=True)
class DoubleBracketForm:
    gram: Matrix
    provenance: str

    @property
    def form(self):
        return BilinearForm(self.gram)


def _index_shape(f):
    if isinstance(f, StableTailFamily):
        return "stable_tail"
    if isinstance(f, FormFamily):
        return "finite"
    raise TypeError("expected a StableTailFamily or a FormFamily")


def in_ultrafilter(f, indices):
    """Membership of an index set in the ultrafilter attached to ``f``.

    ``indices`` is a predicate on positive integers. For stable-tail families
    the predicate is only trusted on sets determined by the family's data, so
    testing the first index past the cut decides cofiniteness.
    """
    if _index_shape(f) == "finite":
        return bool(indices(len(f)))
    return bool(indices(f.cut + 1))


def double_bracket(f):
    """The form ``x, y -> class of (<x,y>_i)_i``, as a Gram matrix over the base field."""
    if _index_shape(f) == "finite":
        return DoubleBracketForm(f.members[-1].gram, "finite")
    return DoubleBracketForm(f.tail.gram, "stable_tail")


def pathological_subspace(f):
    """Vectors pairing to zero with everything under the double bracket."""
    return kernel(double_bracket(f).gram)


def _members_at(f, i):
    if _index_shape(f) == "finite":
        return f.members[i - 1]
    return f.member(i)


def is_pathological(f, x):
    """Decide ``x`` directly from evaluation sequences and ultrafilter membership."""
    F = f.field
    x = tuple(F.coerce(a) for a in x)
    for j in range(f.dim):
        e = tuple(F.one if k == j else F.zero for k in range(f.dim))
        zero_at = lambda i, e=e: F.is_zero(pair(_members_at(f, i).gram, x, e))
        if not in_ultrafilter(f, zero_at):
            return False
    return True


@dataclass
class PajaroReport:
    nonpathological: bool
    double_bracket_nondegenerate: bool
    orthogonalizable: bool
    enlarged_diagonal: Optional[bool] = None

    def as_dict(self):
        return {"nonpathological": self.nonpathological,
                "double_bracket_nondegenerate": self.double_bracket_nondegenerate,
                "orthogonalizable": self.orthogonalizable,
                "enlarged_diagonal": self.enlarged_diagonal}


def _basis_of(certificate):
    return getattr(certificate, "basis", certificate)


def check_pajaro(f, certificate=None):
    """Check the implications linking pathology, the double bracket and orthogonality.

    With (a) nonpathological, (b) double bracket nondegenerate and (c) a
    supplied certificate diagonalizing every member: (a) and (c) give (b), and
    (b) gives (a). The same basis must also diagonalize the double bracket.
    """
    path = pathological_subspace(f)
    db = double_bracket(f)
    a = path.is_zero()
    b = kernel(db.gram).is_zero()
    for v in path.basis:
        if not is_pathological(f, v):
            raise ImplicationViolated("computed pathological vector fails the direct test")
    c = False
    enlarged = None
    if certificate is not None:
        basis = _basis_of(certificate)
        members = f.prefix + [f.tail] if isinstance(f, StableTailFamily) else f.members
        c = all((basis.T @ m.gram @ basis).is_diagonal() for m in members)
        if not c:
            raise ValueError("certificate does not diagonalize the family")
        enlarged = (basis.T @ db.gram @ basis).is_diagonal()
        if not enlarged:
            raise ImplicationViolated("certificate does not diagonalize the double bracket")
    if a and c and not b:
        raise ImplicationViolated("nonpathological and orthogonalizable but degenerate")
    if b and not a:
        raise ImplicationViolated("nondegenerate double bracket but pathological")
    return PajaroReport(a, b, c, enlarged)


# generators ------------------------------------------------------------------

def single_zero_diagonal_family(field, dim):
    """Member ``i`` (for ``i <= dim``) is the identity with a zero at ``(i, i)``; the tail is the identity."""
    prefix = []
    for i in range(dim):
        d = [field.zero if j == i else field.one for j in range(dim)]
        prefix.append(BilinearForm(Matrix.diag(field, d)))
    return StableTailFamily(prefix, BilinearForm(Matrix.identity(field, dim)))


def growing_support_family(field, n):
    """Member ``i`` has ones in the first ``i`` diagonal slots; truncated at ``n`` with tail the identity."""
    prefix = []
    for i in range(1, n + 1):
        d = [field.one if j < i else field.zero for j in range(n)]
        prefix.append(BilinearForm(Matrix.diag(field, d)))
    return StableTailFamily(prefix, BilinearForm(Matrix.identity(field, n)))


def random_symmetric(rng, field, dim, lo=-2, hi=2):
    rows = [[None] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(i, dim):
            v = field.coerce(rng.randint(lo, hi))
            rows[i][j] = rows[j][i] = v
    return Matrix(field, rows)


def random_stable_tail_family(rng, field, dim, max_prefix=3):
    """Random prefix and tail; half the time the tail is a diagonal form."""
    prefix = [BilinearForm(random_symmetric(rng, field, dim))
              for _ in range(rng.randint(0, max_prefix))]
    if rng.random() < 0.5:
        tail = BilinearForm(Matrix.diag(field, [rng.randint(-2, 2) for _ in range(dim)]))
    else:
        tail = BilinearForm(random_symmetric(rng, field, dim))
    return StableTailFamily(prefix, tail)
