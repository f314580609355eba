# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled GF(p) kernels; same contracts as ``_pykernels``.

Residues are held in C ``long long``; callers only route here when
``p < 2**31`` so products never overflow.
"""

from libc.stdlib cimport malloc, free


cdef inline long long _mod(long long a, long long p) nogil:
    a %= p
    return a + p if a < 0 else a


cdef long long _inv(long long a, long long p) nogil:
    cdef long long t = 0, newt = 1, r = p, newr = a, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    return _mod(t, p)


cdef long long* _load(rows, int nrows, int ncols) except NULL:
    cdef long long* m = <long long*> malloc(max(nrows * ncols, 1) * sizeof(long long))
    if m == NULL:
        raise MemoryError()
    cdef int i, j
    for i in range(nrows):
        row = rows[i]
        for j in range(ncols):
            m[i * ncols + j] = row[j]
    return m


cdef int _rref(long long* m, int nrows, int ncols, long long p, int* pivots) nogil:
    cdef int r = 0, c, i, k, piv
    cdef long long inv, f, tmp
    for c in range(ncols):
        if r == nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if m[i * ncols + c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for k in range(ncols):
                tmp = m[r * ncols + k]
                m[r * ncols + k] = m[piv * ncols + k]
                m[piv * ncols + k] = tmp
        inv = _inv(m[r * ncols + c], p)
        if inv != 1:
            for k in range(c, ncols):
                m[r * ncols + k] = m[r * ncols + k] * inv % p
        for i in range(nrows):
            if i != r:
                f = m[i * ncols + c]
                if f != 0:
                    for k in range(c, ncols):
                        m[i * ncols + k] = _mod(m[i * ncols + k] - f * m[r * ncols + k], p)
        pivots[r] = c
        r += 1
    return r


def rref_mod_p(rows, int ncols, long long p):
    cdef int nrows = len(rows)
    cdef long long* m = _load(rows, nrows, ncols)
    cdef int* pivots = <int*> malloc(max(nrows, 1) * sizeof(int))
    cdef int rank, i, j
    try:
        rank = _rref(m, nrows, ncols, p, pivots)
        out = [[m[i * ncols + j] for j in range(ncols)] for i in range(rank)]
        return out, [pivots[i] for i in range(rank)]
    finally:
        free(m)
        free(pivots)


cdef long long _det(long long* m, int n, long long p) nogil:
    cdef int c, i, k, piv
    cdef long long det = 1, inv, f, tmp
    for c in range(n):
        piv = -1
        for i in range(c, n):
            if m[i * n + c] != 0:
                piv = i
                break
        if piv < 0:
            return 0
        if piv != c:
            for k in range(n):
                tmp = m[c * n + k]
                m[c * n + k] = m[piv * n + k]
                m[piv * n + k] = tmp
            det = p - det if det != 0 else 0
        det = det * m[c * n + c] % p
        inv = _inv(m[c * n + c], p)
        for i in range(c + 1, n):
            f = m[i * n + c] * inv % p
            if f != 0:
                for k in range(c, n):
                    m[i * n + k] = _mod(m[i * n + k] - f * m[c * n + k], p)
    return det % p


def det_mod_p(rows, long long p):
    cdef int n = len(rows)
    cdef long long* m = _load(rows, n, n)
    try:
        return _det(m, n, p)
    finally:
        free(m)


def congruence_search(grams, int n, long long p):
    cdef int nforms = len(grams)
    cdef int nn = n * n
    cdef long long* G = <long long*> malloc(max(nforms * nn, 1) * sizeof(long long))
    cdef long long* P = <long long*> malloc(nn * sizeof(long long))
    cdef long long* W = <long long*> malloc(nn * sizeof(long long))
    cdef long long* GP = <long long*> malloc(nn * sizeof(long long))
    cdef int f, i, j, k, r, s, pos
    cdef long long acc, checked = 0
    cdef bint ok, found = False
    if G == NULL or P == NULL or W == NULL or GP == NULL:
        free(G); free(P); free(W); free(GP)
        raise MemoryError()
    try:
        for f in range(nforms):
            for i in range(n):
                for j in range(n):
                    G[f * nn + i * n + j] = grams[f][i][j]
        for i in range(nn):
            P[i] = 0
        with nogil:
            while True:
                for i in range(nn):
                    W[i] = P[i]
                if _det(W, n, p) != 0:
                    checked += 1
                    ok = True
                    for f in range(nforms):
                        for r in range(n):
                            for k in range(n):
                                acc = 0
                                for s in range(n):
                                    acc = (acc + G[f * nn + r * n + s] * P[s * n + k]) % p
                                GP[r * n + k] = acc
                        for j in range(n):
                            for k in range(j + 1, n):
                                acc = 0
                                for r in range(n):
                                    acc = (acc + P[r * n + j] * GP[r * n + k]) % p
                                if acc != 0:
                                    ok = False
                                    break
                            if not ok:
                                break
                        if not ok:
                            break
                    if ok:
                        found = True
                        break
                # odometer: last entry least significant
                pos = nn - 1
                while pos >= 0:
                    P[pos] += 1
                    if P[pos] < p:
                        break
                    P[pos] = 0
                    pos -= 1
                if pos < 0:
                    break
        if found:
            return tuple([P[i] for i in range(nn)]), checked
        return None, checked
    finally:
        free(G); free(P); free(W); free(GP)
