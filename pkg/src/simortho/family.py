"""Finite families of forms: common radical, nondegenerate combinations, base change."""

from .errors import NoCanonicalEmbedding, NotFound
from .fields import FieldValue, Rationals, RationalFunctions, enumerate_elements
from .forms import BilinearForm, radical
from .linalg import Matrix, Subspace, det
from .ratfunc import RatFunc

DEFAULT_COMBINATION_BUDGET = 100_000
SYMBOLIC_DET_MAX_DIM = 8


class FormFamily:
    """Non-empty ordered list of symmetric forms on one space."""

    __slots__ = ("field", "dim", "members", "labels")

    def __init__(self, members, labels=None):
        members = list(members)
        if not members:
            raise ValueError("a family needs at least one form")
        field, dim = members[0].field, members[0].dim
        for m in members:
            if m.field != field or m.dim != dim:
                raise ValueError("family members live on different spaces")
        if labels is not None and len(labels) != len(members):
            raise ValueError("one label per member")
        self.field = field
        self.dim = dim
        self.members = members
        self.labels = list(labels) if labels is not None else None

    @classmethod
    def from_grams(cls, field, grams, labels=None):
        return cls([BilinearForm(Matrix(field, g)) for g in grams], labels)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i):
        return self.members[i]

    def grams(self):
        return [m.gram for m in self.members]

    def __eq__(self, other):
        return isinstance(other, FormFamily) and self.members == other.members

    def __repr__(self):
        return f"FormFamily({self.field!r}, dim={self.dim}, size={len(self)})"


def family_radical(f):
    """Intersection of the member radicals."""
    out = Subspace.full(f.field, f.dim)
    for m in f.members:
        out = out.intersection(radical(m))
        if out.is_zero():
            break
    return out


def minimal_radical_support(f):
    """Greedy index set whose radicals already intersect to ``rad(f)``.

    An index is kept iff it strictly shrinks the running intersection; the
    first index is always kept.
    """
    running = radical(f.members[0])
    keep = [0]
    for i, m in enumerate(f.members[1:], start=1):
        if running.is_zero():
            break
        nxt = running.intersection(radical(m))
        if nxt.dim < running.dim:
            keep.append(i)
            running = nxt
    return keep


def combine(f, coeffs):
    """``sum_j x_j G_j`` as a BilinearForm."""
    F = f.field
    coeffs = [F.coerce(c) for c in coeffs]
    if len(coeffs) != len(f):
        raise ValueError("one coefficient per member")
    acc = Matrix.zeros(F, f.dim, f.dim)
    for c, m in zip(coeffs, f.members):
        if not F.is_zero(c):
            acc = acc + m.gram.scale(c)
    return BilinearForm(acc)


def _tuples_with_sum(length, total, side):
    """Rank tuples of ``length`` entries in ``[0, side)`` summing to ``total``, lex order."""
    if length == 0:
        if total == 0:
            yield ()
        return
    for first in range(min(total, side - 1) + 1):
        rest = total - first
        if rest > (length - 1) * (side - 1):
            continue
        for tail in _tuples_with_sum(length - 1, rest, side):
            yield (first,) + tail


def nondegenerate_combination(f, budget=DEFAULT_COMBINATION_BUDGET):
    """First coefficient tuple on the grid with a nonsingular combination.

    The grid uses the first ``dim + 1`` scalars of the field per member. If the
    whole grid is singular and the grid side is ``dim + 1``, the determinant
    (a polynomial of degree at most ``dim``) vanishes identically.
    """
    F = f.field
    if f.dim == 0:
        return [FieldValue(F, F.one)] + [FieldValue(F, F.zero)] * (len(f) - 1)
    side = f.dim + 1
    scalars = [v.raw for v in enumerate_elements(F, side)][:side]
    m = len(f)
    evaluated = 0
    grid = len(scalars) ** m - 1
    for ranks in combination_order(m, len(scalars)):
        if evaluated >= budget:
            if f.dim <= SYMBOLIC_DET_MAX_DIM and not determinant_polynomial(f):
                raise NotFound("identically_singular", evaluated)
            raise NotFound("budget_exhausted", evaluated)
        coeffs = [scalars[r] for r in ranks]
        evaluated += 1
        if det(combine(f, coeffs).gram):
            return [FieldValue(F, c) for c in coeffs]
    if len(scalars) >= side and evaluated == grid:
        raise NotFound("identically_singular", evaluated)
    if f.dim <= SYMBOLIC_DET_MAX_DIM and not determinant_polynomial(f):
        raise NotFound("identically_singular", evaluated)
    raise NotFound("small_field", evaluated)


def _poly_mul(F, a, b):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            c = F.add(out.get(e, F.zero), F.mul(ca, cb))
            if F.is_zero(c):
                out.pop(e, None)
            else:
                out[e] = c
    return out


def _poly_add_into(F, acc, b, negate):
    for e, c in b.items():
        c = F.sub(acc.get(e, F.zero), c) if negate else F.add(acc.get(e, F.zero), c)
        if F.is_zero(c):
            acc.pop(e, None)
        else:
            acc[e] = c


def determinant_polynomial(f):
    """``det(sum_j x_j G_j)`` as a dict from exponent tuples to coefficients.

    Laplace expansion along rows, memoized over the set of used columns.
    Used when the grid is too small to decide whether the determinant
    vanishes identically.
    """
    F = f.field
    m, n = len(f), f.dim
    units = [tuple(1 if k == j else 0 for k in range(m)) for j in range(m)]
    entry = [[{units[j]: g.rows[r][c] for j, g in enumerate(f.grams())
               if not F.is_zero(g.rows[r][c])} for c in range(n)] for r in range(n)]
    layer = {0: {(0,) * m: F.one}}
    for r in range(n):
        nxt = {}
        for used, poly in layer.items():
            if not poly:
                continue
            for c in range(n):
                bit = 1 << c
                if used & bit or not entry[r][c]:
                    continue
                # sign: parity of the used columns to the right of c
                negate = bin(used >> (c + 1)).count("1") % 2 == 1
                term = _poly_mul(F, poly, entry[r][c])
                _poly_add_into(F, nxt.setdefault(used | bit, {}), term, negate)
        layer = nxt
    return layer.get((1 << n) - 1, {})


def combination_order(m, side):
    """Nonzero rank tuples of the grid ``[0, side)^m`` in search order.

    Tuples using fewer trailing members come first, then smaller rank sums,
    then lexicographic order.
    """
    if side <= 1:
        return
    for h in range(m):
        for s in range(1, (h + 1) * (side - 1) + 1):
            block = []
            for last in range(1, min(s, side - 1) + 1):
                for head in _tuples_with_sum(h, s - last, side):
                    block.append(head + (last,))
            block.sort()
            for t in block:
                yield t + (0,) * (m - h - 1)


def base_change(f, target):
    """Reinterpret every Gram entry in ``target`` (identity or Q into Q(t))."""
    src = f.field
    if src == target:
        return f
    if isinstance(src, Rationals) and isinstance(target, RationalFunctions):
        members = [BilinearForm(m.gram.map(target, RatFunc.constant)) for m in f.members]
        return FormFamily(members, f.labels)
    raise NoCanonicalEmbedding(f"no canonical embedding {src!r} -> {target!r}")
