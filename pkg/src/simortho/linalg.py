"""Dense exact matrices, subspaces and the eigen-machinery built on RREF.

Entries are raw field payloads (see :mod:`simortho.fields`). Over GF(p) the
row reduction and determinant run through the compiled kernels when present.
"""

from fractions import Fraction
from math import lcm

from . import _accel
from .errors import NoSolution, SingularMatrix, UnsupportedField
from .fields import FieldValue, PrimeField, Rationals, RationalFunctions


class Matrix:
    """Immutable dense matrix over an exact field."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field, rows, ncols=None):
        rows = tuple(tuple(field.coerce(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("cannot infer the column count of an empty matrix")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
        self.field = field
        self.nrows = len(rows)
        self.ncols = ncols
        self.rows = rows

    @classmethod
    def _make(cls, field, rows, ncols):
        obj = object.__new__(cls)
        obj.field = field
        obj.rows = rows if isinstance(rows, tuple) else tuple(rows)
        obj.nrows = len(obj.rows)
        obj.ncols = ncols
        return obj

    @classmethod
    def identity(cls, field, n):
        z, o = field.zero, field.one
        return cls._make(field, tuple(tuple(o if i == j else z for j in range(n))
                                      for i in range(n)), n)

    @classmethod
    def zeros(cls, field, nrows, ncols):
        return cls._make(field, tuple((field.zero,) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def diag(cls, field, values):
        values = [field.coerce(v) for v in values]
        n = len(values)
        return cls._make(field, tuple(tuple(values[i] if i == j else field.zero
                                            for j in range(n)) for i in range(n)), n)

    @classmethod
    def from_columns(cls, field, columns, nrows):
        columns = list(columns)
        return cls._make(field, tuple(tuple(c[i] for c in columns) for i in range(nrows)),
                         len(columns))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def T(self):
        return Matrix._make(self.field, tuple(zip(*self.rows)) if self.nrows else
                            tuple(() for _ in range(self.ncols)), self.nrows)

    def __getitem__(self, idx):
        i, j = idx
        return FieldValue(self.field, self.rows[i][j])

    def column(self, j):
        return tuple(r[j] for r in self.rows)

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.field == other.field
                and self.shape == other.shape and self.rows == other.rows)

    def __hash__(self):
        return hash((self.field, self.shape, self.rows))

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        _same_field(self, other)
        cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
        F = self.field
        if isinstance(F, PrimeField):
            p = F.p
            rows = tuple(tuple(sum(a * b for a, b in zip(r, c)) % p for c in cols)
                         for r in self.rows)
        else:
            z = F.zero
            rows = tuple(tuple(sum((a * b for a, b in zip(r, c) if a and b), z)
                               for c in cols) for r in self.rows)
        return Matrix._make(F, rows, other.ncols)

    def _elementwise(self, other, op):
        _same_field(self, other)
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix._make(self.field, tuple(tuple(op(a, b) for a, b in zip(r, s))
                                              for r, s in zip(self.rows, other.rows)),
                            self.ncols)

    def __add__(self, other):
        return self._elementwise(other, self.field.add)

    def __sub__(self, other):
        return self._elementwise(other, self.field.sub)

    def __neg__(self):
        neg = self.field.neg
        return Matrix._make(self.field, tuple(tuple(neg(a) for a in r) for r in self.rows),
                            self.ncols)

    def scale(self, c):
        c = self.field.coerce(c)
        mul = self.field.mul
        return Matrix._make(self.field, tuple(tuple(mul(c, a) for a in r) for r in self.rows),
                            self.ncols)

    def apply(self, vector):
        """Matrix times a raw column vector."""
        F = self.field
        if isinstance(F, PrimeField):
            return tuple(sum(a * b for a, b in zip(r, vector)) % F.p for r in self.rows)
        return tuple(sum((a * b for a, b in zip(r, vector) if a and b), F.zero)
                     for r in self.rows)

    def select_columns(self, idx):
        return Matrix._make(self.field, tuple(tuple(r[j] for j in idx) for r in self.rows),
                            len(idx))

    def select_rows(self, idx):
        return Matrix._make(self.field, tuple(self.rows[i] for i in idx), self.ncols)

    def hstack(self, other):
        _same_field(self, other)
        return Matrix._make(self.field, tuple(r + s for r, s in zip(self.rows, other.rows)),
                            self.ncols + other.ncols)

    def is_square(self):
        return self.nrows == self.ncols

    def is_symmetric(self):
        return self.is_square() and all(self.rows[i][j] == self.rows[j][i]
                                        for i in range(self.nrows) for j in range(i))

    def is_zero(self):
        return not any(a for r in self.rows for a in r)

    def is_diagonal(self):
        return all(not a for i, r in enumerate(self.rows) for j, a in enumerate(r) if i != j)

    def off_diagonal_nonzero(self):
        """First ``(i, j)`` with a nonzero off-diagonal entry, else ``None``."""
        for i, r in enumerate(self.rows):
            for j, a in enumerate(r):
                if i != j and a:
                    return (i, j)
        return None

    def diagonal(self):
        return [FieldValue(self.field, self.rows[i][i]) for i in range(min(self.shape))]

    def map(self, field, fn):
        return Matrix._make(field, tuple(tuple(fn(a) for a in r) for r in self.rows),
                            self.ncols)

    def to_strings(self):
        fmt = self.field.format
        return [[fmt(a) for a in r] for r in self.rows]

    def __repr__(self):
        return f"Matrix({self.field!r}, {self.to_strings()})"


def _same_field(a, b):
    if a.field != b.field:
        from .errors import FieldMismatch
        raise FieldMismatch(f"{a.field!r} vs {b.field!r}")


# row reduction ---------------------------------------------------------------

def _rref_rows(field, rows, ncols):
    """RREF of raw rows. Returns (nonzero rows as tuples, pivot columns)."""
    if isinstance(field, PrimeField):
        out, piv = _accel.rref_mod_p([list(r) for r in rows], ncols, field.p)
        return [tuple(r) for r in out], list(piv)
    m = [list(r) for r in rows]
    nrows = len(m)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        row = m[r]
        lead = row[c]
        if lead != 1:
            inv = 1 / lead
            row[c:] = [x * inv if x else x for x in row[c:]]
        for i in range(nrows):
            if i != r:
                f = m[i][c]
                if f:
                    other = m[i]
                    for k in range(c, ncols):
                        if row[k]:
                            other[k] = other[k] - f * row[k]
        pivots.append(c)
        r += 1
    return [tuple(x) for x in m[:r]], pivots


def rref(m):
    """Reduced row echelon form; returns ``(R, pivots)`` with zero rows dropped."""
    rows, piv = _rref_rows(m.field, m.rows, m.ncols)
    return Matrix._make(m.field, tuple(rows), m.ncols), tuple(piv)


def rank(m):
    return len(_rref_rows(m.field, m.rows, m.ncols)[1])


class Subspace:
    """Subspace of ``field^ambient`` stored by the RREF of a spanning set.

    The RREF is unique, so two subspaces are equal exactly when their stored
    bases are equal.
    """

    __slots__ = ("field", "ambient", "basis", "pivots")

    def __init__(self, field, ambient, basis, pivots):
        self.field = field
        self.ambient = ambient
        self.basis = tuple(basis)
        self.pivots = tuple(pivots)

    @classmethod
    def span(cls, field, ambient, vectors):
        vectors = [tuple(field.coerce(x) for x in v) for v in vectors]
        for v in vectors:
            if len(v) != ambient:
                raise ValueError("vector length does not match the ambient dimension")
        if not vectors:
            return cls(field, ambient, (), ())
        rows, piv = _rref_rows(field, vectors, ambient)
        return cls(field, ambient, rows, piv)

    @classmethod
    def zero(cls, field, n):
        return cls(field, n, (), ())

    @classmethod
    def full(cls, field, n):
        return cls(field, n, Matrix.identity(field, n).rows, range(n))

    @property
    def dim(self):
        return len(self.basis)

    def is_zero(self):
        return not self.basis

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.field == other.field
                and self.ambient == other.ambient and self.basis == other.basis)

    def __hash__(self):
        return hash((self.field, self.ambient, self.basis))

    def __repr__(self):
        fmt = self.field.format
        vecs = ", ".join("(" + ", ".join(fmt(a) for a in v) + ")" for v in self.basis)
        return f"Subspace({self.field!r}, dim={self.dim}/{self.ambient}, [{vecs}])"

    def coordinates(self, vector):
        """Coordinates of ``vector`` in the stored basis, or ``None`` if outside."""
        vector = tuple(self.field.coerce(x) for x in vector)
        coords = [vector[p] for p in self.pivots]
        F = self.field
        recon = [F.zero] * self.ambient
        for c, b in zip(coords, self.basis):
            if not F.is_zero(c):
                recon = [F.add(x, F.mul(c, y)) for x, y in zip(recon, b)]
        if tuple(recon) != vector:
            return None
        return coords

    def __contains__(self, vector):
        return self.coordinates(vector) is not None

    def issubset(self, other):
        return all(v in other for v in self.basis)

    def __add__(self, other):
        return Subspace.span(self.field, self.ambient, self.basis + other.basis)

    def intersection(self, other):
        if self.is_zero() or other.is_zero():
            return Subspace.zero(self.field, self.ambient)
        # x = sum a_i u_i = sum b_j w_j  <=>  [U | -W] (a, b) = 0
        F = self.field
        cols = list(self.basis) + [tuple(F.neg(x) for x in w) for w in other.basis]
        system = Matrix.from_columns(F, cols, self.ambient)
        ker = kernel(system)
        k = self.dim
        vecs = []
        for sol in ker.basis:
            a = sol[:k]
            v = [F.zero] * self.ambient
            for c, u in zip(a, self.basis):
                if not F.is_zero(c):
                    v = [F.add(x, F.mul(c, y)) for x, y in zip(v, u)]
            vecs.append(v)
        return Subspace.span(F, self.ambient, vecs)

    def matrix(self):
        """Basis vectors as the columns of an ``ambient x dim`` matrix."""
        return Matrix.from_columns(self.field, self.basis, self.ambient)

    def complement_indices(self):
        piv = set(self.pivots)
        return [i for i in range(self.ambient) if i not in piv]

    def section(self):
        """Columns: standard basis vectors at the non-pivot coordinates.

        They span a complement of this subspace.
        """
        F = self.field
        cols = []
        for i in self.complement_indices():
            e = [F.zero] * self.ambient
            e[i] = F.one
            cols.append(e)
        return Matrix.from_columns(F, cols, self.ambient)

    def vectors(self):
        return [[FieldValue(self.field, a) for a in v] for v in self.basis]

    def sort_key(self):
        key = self.field.sort_key
        return (self.pivots, tuple(tuple(key(a) for a in v) for v in self.basis))


def kernel(m):
    """Right null space of ``m``."""
    F = m.field
    rows, piv = _rref_rows(F, m.rows, m.ncols)
    pivset = set(piv)
    vecs = []
    for f in range(m.ncols):
        if f in pivset:
            continue
        v = [F.zero] * m.ncols
        v[f] = F.one
        for r, pc in enumerate(piv):
            if not F.is_zero(rows[r][f]):
                v[pc] = F.neg(rows[r][f])
        vecs.append(v)
    return Subspace.span(F, m.ncols, vecs)


def solve_matrix_equation(a, b):
    """One ``P`` with ``a @ P == b``; free variables are set to zero.

    Raises :class:`NoSolution` naming the first column of ``b`` outside the
    column space of ``a``.
    """
    if a.nrows != b.nrows:
        raise ValueError("row count mismatch")
    _same_field(a, b)
    F = a.field
    n = a.ncols
    aug = [ra + rb for ra, rb in zip(a.rows, b.rows)]
    rows, piv = _rref_rows(F, aug, n + b.ncols)
    r_a = sum(1 for p in piv if p < n)
    for j in range(b.ncols):
        for r in range(r_a, len(rows)):
            if not F.is_zero(rows[r][n + j]):
                raise NoSolution(j)
    out = [[F.zero] * b.ncols for _ in range(n)]
    for r in range(r_a):
        out[piv[r]] = list(rows[r][n:])
    return Matrix._make(F, tuple(tuple(r) for r in out), b.ncols)


def inverse(m):
    if not m.is_square():
        raise ValueError("inverse of a non-square matrix")
    if rank(m) != m.nrows:
        raise SingularMatrix("matrix is singular")
    return solve_matrix_equation(m, Matrix.identity(m.field, m.nrows))


def det(m):
    if not m.is_square():
        raise ValueError("determinant of a non-square matrix")
    F = m.field
    n = m.nrows
    if n == 0:
        return FieldValue(F, F.one)
    if isinstance(F, PrimeField):
        return FieldValue(F, _accel.det_mod_p([list(r) for r in m.rows], F.p))
    a = [list(r) for r in m.rows]
    d = F.one
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return FieldValue(F, F.zero)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            d = -d
        lead = a[c][c]
        d = d * lead
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] / lead
                for k in range(c, n):
                    if a[c][k]:
                        a[i][k] = a[i][k] - f * a[c][k]
    return FieldValue(F, d)


# polynomials and eigenvalues ------------------------------------------------

class Polynomial:
    """Univariate polynomial over a field, coefficients lowest degree first."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        coeffs = [field.coerce(c) for c in coeffs]
        while coeffs and field.is_zero(coeffs[-1]):
            coeffs.pop()
        self.field = field
        self.coeffs = tuple(coeffs)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, x):
        F = self.field
        x = F.coerce(x)
        acc = F.zero
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return FieldValue(F, acc)

    def __eq__(self, other):
        return (isinstance(other, Polynomial) and self.field == other.field
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def coefficients(self):
        return [FieldValue(self.field, c) for c in self.coeffs]

    def __repr__(self):
        F = self.field
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if F.is_zero(c):
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            s = F.format(c)
            if mono:
                s = mono if c == F.one else f"{s}*{mono}"
            terms.append(s)
        return f"Polynomial({F!r}, {' + '.join(terms) or '0'})"


def char_poly(m):
    """Monic ``det(xI - m)`` via Hessenberg reduction (valid over any field)."""
    if not m.is_square():
        raise ValueError("characteristic polynomial of a non-square matrix")
    F = m.field
    n = m.nrows
    add, sub, mul, div, zero, one = F.add, F.sub, F.mul, F.div, F.zero, F.one
    is_zero = F.is_zero
    H = [list(r) for r in m.rows]
    for k in range(1, n - 1):
        i = next((i for i in range(k, n) if not is_zero(H[i][k - 1])), None)
        if i is None:
            continue
        if i != k:
            H[i], H[k] = H[k], H[i]
            for row in H:
                row[i], row[k] = row[k], row[i]
        t = H[k][k - 1]
        for j in range(k + 1, n):
            if is_zero(H[j][k - 1]):
                continue
            u = div(H[j][k - 1], t)
            H[j] = [sub(a, mul(u, b)) for a, b in zip(H[j], H[k])]
            for row in H:
                row[k] = add(row[k], mul(u, row[j]))
    # p_m = (x - h_mm) p_{m-1} - sum_i h_im (prod_{j=i+1..m} h_{j,j-1}) p_{i-1}
    polys = [[one]]
    for mm in range(1, n + 1):
        prev = polys[mm - 1]
        new = [zero] + list(prev)
        h = H[mm - 1][mm - 1]
        for d, c in enumerate(prev):
            new[d] = sub(new[d], mul(h, c))
        t = one
        for i in range(mm - 1, 0, -1):
            t = mul(t, H[i][i - 1])
            coef = mul(H[i - 1][mm - 1], t)
            if is_zero(coef):
                continue
            for d, c in enumerate(polys[i - 1]):
                new[d] = sub(new[d], mul(coef, c))
        polys.append(new)
    return Polynomial(F, polys[n])


def _deflate(field, coeffs, root):
    """Divide by (x - root); returns (quotient, remainder)."""
    F = field
    out = [F.zero] * (len(coeffs) - 1)
    acc = F.zero
    for k in range(len(coeffs) - 1, 0, -1):
        acc = F.add(F.mul(acc, root), coeffs[k])
        out[k - 1] = acc
    rem = F.add(F.mul(acc, root), coeffs[0])
    return out, rem


def _multiplicity(field, coeffs, root):
    mult = 0
    while len(coeffs) > 1:
        q, rem = _deflate(field, coeffs, root)
        if not field.is_zero(rem):
            break
        coeffs = q
        mult += 1
    return mult


# primes above this get their roots from a factorization instead of evaluation
EXHAUSTIVE_ROOT_LIMIT = 10 ** 5
# beyond this size, enumerating divisors means factoring large integers
DIVISOR_METHOD_LIMIT = 10 ** 12


def _divisors(n):
    from sympy import divisors
    return divisors(abs(n))


def _rational_root_candidates(ints):
    """Candidates p/q (lowest terms) for roots of a nonzero-constant integer polynomial."""
    a0, an = ints[0], ints[-1]
    f1 = sum(ints)
    fm1 = sum(c if k % 2 == 0 else -c for k, c in enumerate(ints))
    seen = set()
    for q in _divisors(an):
        for p in _divisors(a0):
            for s in (p, -p):
                r = Fraction(s, q)
                if r in seen or r.denominator != q:
                    continue
                seen.add(r)
                # necessary conditions: (q - s) | f(1), (q + s) | f(-1)
                if f1 and (q - s) and f1 % (q - s):
                    continue
                if fm1 and (q + s) and fm1 % (q + s):
                    continue
                yield r


def _linear_factor_roots(ints):
    """Rational roots read off the linear factors of a factorization over Z."""
    from sympy import Poly, Symbol
    x = Symbol("x")
    out = []
    for factor, _mult in Poly(list(reversed(ints)), x).factor_list()[1]:
        if factor.degree() == 1:
            b, a = factor.all_coeffs()
            out.append(Fraction(-int(a), int(b)))
    return out


def _roots_mod_p(coeffs, p):
    """Roots in GF(p) from the linear factors of a factorization mod p, ascending."""
    from sympy import Poly, Symbol
    x = Symbol("x")
    out = []
    for factor, _mult in Poly(list(reversed(coeffs)), x, modulus=p).factor_list()[1]:
        if factor.degree() == 1:
            b, a = (int(c) % p for c in factor.all_coeffs())
            out.append(-a * pow(b, -1, p) % p)
    return sorted(out)


def _rational_roots(ints):
    if max(abs(ints[0]), abs(ints[-1])) <= DIVISOR_METHOD_LIMIT:
        return _rational_root_candidates(ints)
    return _linear_factor_roots(ints)


def roots_in_field(poly):
    """Roots lying in the ground field with multiplicities, in canonical order."""
    F = poly.field
    coeffs = list(poly.coeffs)
    if len(coeffs) <= 1:
        return []
    if isinstance(F, PrimeField):
        found = []
        for a in (range(F.p) if F.p <= EXHAUSTIVE_ROOT_LIMIT else _roots_mod_p(coeffs, F.p)):
            mult = _multiplicity(F, coeffs, a)
            if mult:
                found.append((FieldValue(F, a), mult))
        return found
    if not isinstance(F, Rationals):
        raise UnsupportedField(f"root finding over {F!r} is not supported")
    found = []
    zeros = 0
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
        zeros += 1
    if zeros:
        found.append((FieldValue(F, Fraction(0)), zeros))
    if len(coeffs) > 1:
        den = lcm(*(c.denominator for c in coeffs))
        ints = [int(c * den) for c in coeffs]
        for r in _rational_roots(ints):
            mult = _multiplicity(F, coeffs, r)
            if mult:
                found.append((FieldValue(F, r), mult))
    found.sort(key=lambda rm: F.sort_key(rm[0].raw))
    return found


def eigenspace(m, value):
    F = m.field
    lam = F.coerce(value)
    shifted = Matrix._make(F, tuple(tuple(F.sub(a, lam) if i == j else a
                                          for j, a in enumerate(r))
                                    for i, r in enumerate(m.rows)), m.ncols)
    return kernel(shifted)
