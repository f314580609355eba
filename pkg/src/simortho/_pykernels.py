"""Pure-Python GF(p) kernels.

Reference semantics for the compiled ``_ckernels`` module; both must return
identical results for identical inputs.
"""

from itertools import product


def rref_mod_p(rows, ncols, p):
    """Reduced row echelon form over GF(p).

    ``rows`` is a list of lists of residues. Returns ``(rows, pivots)`` with the
    zero rows dropped.
    """
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    nrows = len(m)
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
        inv = pow(row[c], -1, p)
        if inv != 1:
            for k in range(c, ncols):
                row[k] = row[k] * inv % p
        for i in range(nrows):
            if i != r:
                other = m[i]
                f = other[c]
                if f:
                    for k in range(c, ncols):
                        other[k] = (other[k] - f * row[k]) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def det_mod_p(rows, p):
    n = len(rows)
    m = [list(r) for r in rows]
    det = 1
    for c in range(n):
        piv = None
        for i in range(c, n):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        row = m[c]
        det = det * row[c] % p
        inv = pow(row[c], -1, p)
        for i in range(c + 1, n):
            f = m[i][c] * inv % p
            if f:
                other = m[i]
                for k in range(c, n):
                    other[k] = (other[k] - f * row[k]) % p
    return det % p


def congruence_search(grams, n, p):
    """First invertible P (row-major digits, first entry most significant)
    with ``P^T G P`` diagonal for every G in ``grams``.

    Returns ``(flat_P or None, number of invertible candidates examined)``.
    """
    pairs = [(j, k) for j in range(n) for k in range(j + 1, n)]
    checked = 0
    for flat in product(range(p), repeat=n * n):
        P = [flat[i * n:(i + 1) * n] for i in range(n)]
        if not det_mod_p(P, p):
            continue
        checked += 1
        ok = True
        for G in grams:
            # GP[r][k] = sum_s G[r][s] P[s][k]
            GP = [[sum(G[r][s] * P[s][k] for s in range(n)) for k in range(n)]
                  for r in range(n)]
            for j, k in pairs:
                if sum(P[r][j] * GP[r][k] for r in range(n)) % p:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return tuple(flat), checked
    return None, checked
