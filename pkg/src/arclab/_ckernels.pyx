# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops. Semantics match ``arclab._pykernels`` exactly."""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()


cdef inline long _inv(long a, long p) noexcept nogil:
    # extended Euclid; a is nonzero mod p
    cdef long t = 0, nt = 1, r = p, nr = a % p, q, tmp
    while nr != 0:
        q = r // nr
        tmp = t - q * nt
        t = nt
        nt = tmp
        tmp = r - q * nr
        r = nr
        nr = tmp
    if t < 0:
        t += p
    return t


cdef int _rank(long* a, int rows, int cols, long p) noexcept nogil:
    """Rank mod p of a row-major buffer, destroyed in place."""
    cdef int r = 0, c, i, j, piv
    cdef long inv, f, tmp
    for i in range(rows * cols):
        a[i] %= p
        if a[i] < 0:
            a[i] += p
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if a[i * cols + c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                tmp = a[piv * cols + j]
                a[piv * cols + j] = a[r * cols + j]
                a[r * cols + j] = tmp
        inv = _inv(a[r * cols + c], p)
        for j in range(c, cols):
            a[r * cols + j] = a[r * cols + j] * inv % p
        for i in range(r + 1, rows):
            f = a[i * cols + c]
            if f != 0:
                f = p - f
                for j in range(c, cols):
                    a[i * cols + j] = (a[i * cols + j] + f * a[r * cols + j]) % p
        r += 1
    return r


def rank_mod_p(cnp.int64_t[:, :] mat, long p):
    cdef int rows = mat.shape[0], cols = mat.shape[1], i, j, r
    if rows == 0 or cols == 0:
        return 0
    cdef long* buf = <long*> malloc(rows * cols * sizeof(long))
    for i in range(rows):
        for j in range(cols):
            buf[i * cols + j] = mat[i, j] % p
    r = _rank(buf, rows, cols, p)
    free(buf)
    return r


def hankel_levels(cnp.int64_t[:, :] tails, long p):
    """Smallest m with rank(H_m) <= m for every row of ``tails``.

    H_m is the (L-m) x (m+1) Hankel matrix with entries tail[i+j].
    """
    cdef Py_ssize_t nb = tails.shape[0], L = tails.shape[1], b
    cdef int m, i, j, rows, cols, lev
    out = np.zeros(nb, dtype=np.int64)
    cdef cnp.int64_t[:] ov = out
    cdef long* buf = <long*> malloc((L + 1) * (L + 1) * sizeof(long))
    with nogil:
        for b in range(nb):
            lev = (L + 1) // 2
            for m in range(0, (L + 1) // 2):
                rows = <int>L - m
                cols = m + 1
                for i in range(rows):
                    for j in range(cols):
                        buf[i * cols + j] = tails[b, i + j] % p
                if _rank(buf, rows, cols, p) <= m:
                    lev = m
                    break
            ov[b] = lev
    free(buf)
    return out


def multilinear_zero_count(cnp.int64_t[:, :] tensor, int nvar, int nfac, long p):
    """Number of (z_1..z_r) in (F_p^nvar)^r killing every row of ``tensor``.

    Each row is a flattened r-linear form with index (i_1, ..., i_r), i_r
    fastest. The last factor enters linearly, so the count is a sum of
    p^(nvar - rank) over the first r-1 factors.
    """
    cdef int neq = tensor.shape[0]
    cdef Py_ssize_t width = tensor.shape[1]
    cdef Py_ssize_t outer = 1, t, idx, e, i, cnt
    cdef int f, r
    cdef long coef
    for f in range(nfac - 1):
        outer *= nvar
    cdef long* mat = <long*> malloc(neq * nvar * sizeof(long))
    cdef long* z = <long*> malloc((nfac * nvar + 1) * sizeof(long))
    cdef long* weight = <long*> malloc(outer * sizeof(long))
    cdef long* ppow = <long*> malloc((nvar + 1) * sizeof(long))
    cdef long long acc = 0
    cdef long long npts = 1
    ppow[0] = 1
    for i in range(1, nvar + 1):
        ppow[i] = ppow[i - 1] * p
    for i in range((nfac - 1) * nvar):
        npts *= p
        z[i] = 0
    with nogil:
        for t in range(npts):
            # odometer over the first nfac-1 factors
            if t > 0:
                i = 0
                while True:
                    z[i] += 1
                    if z[i] < p:
                        break
                    z[i] = 0
                    i += 1
            # weight[idx] = prod_f z_f[i_f] over the outer multi-index
            for idx in range(outer):
                coef = 1
                cnt = idx
                for f in range(nfac - 2, -1, -1):
                    coef = coef * z[f * nvar + cnt % nvar] % p
                    cnt = cnt // nvar
                weight[idx] = coef
            for e in range(neq):
                for i in range(nvar):
                    coef = 0
                    for idx in range(outer):
                        if weight[idx] != 0:
                            coef = (coef + weight[idx] * (tensor[e, idx * nvar + i] % p)) % p
                    mat[e * nvar + i] = coef
            r = _rank(mat, neq, nvar, p)
            acc += ppow[nvar - r]
    free(mat)
    free(z)
    free(weight)
    free(ppow)
    return int(acc)


def poly_value_table(cnp.int64_t[:, :] exps, cnp.int64_t[:] coeffs, int nvar, long p):
    """Values of sum_k coeffs[k] * x^exps[k] at every x in F_p^nvar.

    Point index is sum_i x_i p^i (x_0 fastest).
    """
    cdef Py_ssize_t nmon = exps.shape[0], npts = 1, t, k
    cdef int i, maxe = 0
    for i in range(nvar):
        npts *= p
    for k in range(nmon):
        for i in range(nvar):
            if exps[k, i] > maxe:
                maxe = exps[k, i]
    out = np.zeros(npts, dtype=np.int64)
    cdef cnp.int64_t[:] ov = out
    cdef long* pw = <long*> malloc(p * (maxe + 1) * sizeof(long))
    cdef long* x = <long*> malloc((nvar + 1) * sizeof(long))
    cdef long v, term
    cdef long e
    for v in range(p):
        pw[v * (maxe + 1)] = 1
        for e in range(1, maxe + 1):
            pw[v * (maxe + 1) + e] = pw[v * (maxe + 1) + e - 1] * v % p
    for i in range(nvar):
        x[i] = 0
    with nogil:
        for t in range(npts):
            if t > 0:
                i = 0
                while True:
                    x[i] += 1
                    if x[i] < p:
                        break
                    x[i] = 0
                    i += 1
            v = 0
            for k in range(nmon):
                term = coeffs[k] % p
                if term < 0:
                    term += p
                for i in range(nvar):
                    term = term * pw[x[i] * (maxe + 1) + exps[k, i]] % p
                v += term
            ov[t] = v % p
    free(pw)
    free(x)
    return out
