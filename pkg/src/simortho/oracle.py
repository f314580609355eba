"""Brute-force ground truth over small prime fields, and the test corpus generator.

:func:`oracle_so` knows nothing about radicals or operators: it walks GL(n, p)
and tests ``P^T G P`` for diagonality directly.
"""

import random
from dataclasses import dataclass

from . import _accel
from .errors import OutOfBudget
from .family import FormFamily
from .fields import GF, QQ, PrimeField
from .forms import BilinearForm
from .io import family_to_dict
from .linalg import Matrix, det

ORACLE_PRIMES = (2, 3, 5)
ORACLE_MAX_DIM = 3


@dataclass(frozen=True)
class Nonexistent:
    """No invertible matrix diagonalizes the family; ``checked`` candidates were tried."""

    checked: int


def gl_order(n, p):
    out = 1
    for k in range(n):
        out *= p ** n - p ** k
    return out


def oracle_so(family):
    """First diagonalizing basis (as matrix columns) or :class:`Nonexistent`.

    The identity is tried first, then GL(n, p) in row-lexicographic order
    (first entry most significant).
    """
    F = family.field
    if not isinstance(F, PrimeField) or F.p not in ORACLE_PRIMES:
        raise OutOfBudget(f"oracle supports GF(p) for p in {ORACLE_PRIMES}, not {F!r}")
    n = family.dim
    if n > ORACLE_MAX_DIM:
        raise OutOfBudget(f"oracle supports dim <= {ORACLE_MAX_DIM}, got {n}")
    if all(m.gram.is_diagonal() for m in family.members):
        return Matrix.identity(F, n)
    grams = [[list(r) for r in m.gram.rows] for m in family.members]
    flat, checked = _accel.congruence_search(grams, n, F.p)
    if flat is None:
        return Nonexistent(checked)
    return Matrix(F, [flat[i * n:(i + 1) * n] for i in range(n)])


# corpus ----------------------------------------------------------------------

STRATA = ("known_orthogonalizable", "nondegenerate_present", "common_radical",
          "incomparable_radicals", "char2_alternating", "unconstrained")

_FIELDS = (QQ, GF(3), GF(5), GF(7))


def _sym(rng, F, n, lo=-2, hi=2):
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = rng.randint(lo, hi)
    return Matrix(F, rows)


def _invertible(rng, F, n, lo=-2, hi=2):
    while True:
        m = Matrix(F, [[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)])
        if det(m):
            return m


def _congruent(p, g):
    return p.T @ g @ p


def _field_and_dim(rng, max_dim, need_card_above_dim=False):
    F = rng.choice(_FIELDS)
    n = rng.randint(1, max_dim)
    if need_card_above_dim and isinstance(F, PrimeField):
        n = min(n, F.p - 1)
    return F, n


def _known_orthogonalizable(rng, max_dim, max_forms):
    F, n = _field_and_dim(rng, max_dim, need_card_above_dim=True)
    p = _invertible(rng, F, n)
    forms = []
    for _ in range(rng.randint(1, max_forms)):
        d = Matrix.diag(F, [rng.choice([0, 1, 1, 2, -1, 3]) for _ in range(n)])
        forms.append(_congruent(p, d))
    return F, n, forms


def _nondegenerate_present(rng, max_dim, max_forms):
    F, n = _field_and_dim(rng, max_dim)
    forms = [_sym(rng, F, n) for _ in range(rng.randint(1, max_forms))]
    while True:
        g = _sym(rng, F, n)
        if det(g):
            break
    forms.insert(rng.randrange(len(forms) + 1), g)
    return F, n, forms[:max_forms]


def _common_radical(rng, max_dim, max_forms):
    F, _ = _field_and_dim(rng, max_dim)
    n = rng.randint(2, max_dim)
    k = rng.randint(1, n - 1)
    p = _invertible(rng, F, n)
    diagonal_core = rng.random() < 0.5
    forms = []
    for _ in range(rng.randint(1, max_forms)):
        if diagonal_core:
            core = Matrix.diag(F, [rng.choice([0, 1, 2, -1]) for _ in range(k)])
        else:
            core = _sym(rng, F, k)
        big = [[core.rows[i][j] if i < k and j < k else 0 for j in range(n)]
               for i in range(n)]
        forms.append(_congruent(p, Matrix(F, big)))
    # keep at least one member with the full common radical as its radical
    while True:
        core = _sym(rng, F, k)
        if det(core):
            break
    big = [[core.rows[i][j] if i < k and j < k else 0 for j in range(n)] for i in range(n)]
    forms.insert(0, _congruent(p, Matrix(F, big)))
    return F, n, forms[:max_forms]


def _incomparable_radicals(rng, max_dim, max_forms):
    F, _ = _field_and_dim(rng, max_dim)
    n = rng.randint(2, max_dim)
    forms = []
    for _ in range(rng.randint(2, max_forms)):
        k = rng.randint(1, n - 1)
        core = _sym(rng, F, k)
        big = [[core.rows[i][j] if i < k and j < k else 0 for j in range(n)]
               for i in range(n)]
        forms.append(_congruent(_invertible(rng, F, n), Matrix(F, big)))
    return F, n, forms


def _char2_alternating(rng, max_dim, max_forms):
    F = GF(2)
    n = 2 * rng.randint(1, max(1, max_dim // 2))
    hyperbolic = [[1 if (i // 2 == j // 2 and i != j) else 0 for j in range(n)]
                  for i in range(n)]
    forms = [_congruent(_invertible(rng, F, n), Matrix(F, hyperbolic))]
    for _ in range(rng.randint(0, max_forms - 1)):
        forms.append(_sym(rng, F, n))
    return F, n, forms


def _unconstrained(rng, max_dim, max_forms):
    F, n = _field_and_dim(rng, max_dim)
    return F, n, [_sym(rng, F, n) for _ in range(rng.randint(1, max_forms))]


_GENERATORS = {
    "known_orthogonalizable": _known_orthogonalizable,
    "nondegenerate_present": _nondegenerate_present,
    "common_radical": _common_radical,
    "incomparable_radicals": _incomparable_radicals,
    "char2_alternating": _char2_alternating,
    "unconstrained": _unconstrained,
}


def generate_family(seed, index, stratum, max_dim=5, max_forms=4):
    rng = random.Random(f"{seed}:{stratum}:{index}")
    F, n, grams = _GENERATORS[stratum](rng, max_dim, max_forms)
    return FormFamily([BilinearForm(g) for g in grams])


def generate_corpus(seed, count, strata=None, max_dim=5, max_forms=4):
    """``count`` family files (dicts), cycling through ``strata`` in order."""
    strata = list(strata or STRATA)
    for s in strata:
        if s not in _GENERATORS:
            raise ValueError(f"unknown stratum {s!r}")
    out = []
    for k in range(count):
        s = strata[k % len(strata)]
        fam = generate_family(seed, k, s, max_dim, max_forms)
        out.append(family_to_dict(fam, stratum=s))
    return out
