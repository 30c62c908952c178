# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled mod-p kernels: batch polynomial evaluation and row reduction.

All residues are int64 in [0, p) with p < 2^31, so a product of two
residues fits in a signed 64-bit integer.
"""

import numpy as np
cimport numpy as cnp

ctypedef cnp.int64_t i64


cdef inline i64 _powmod(i64 x, i64 e, i64 p) nogil:
    cdef i64 r = 1
    x %= p
    while e:
        if e & 1:
            r = r * x % p
        x = x * x % p
        e >>= 1
    return r


cdef inline i64 _inv(i64 a, i64 p) nogil:
    return _powmod(a, p - 2, p)


def eval_poly_mod_p(const i64[:, :] exps, const i64[:] coeffs, const i64[:, :] points, i64 p):
    """Evaluate sum_k coeffs[k] * x^exps[k] at every row of points, mod p."""
    cdef Py_ssize_t nterms = exps.shape[0], nv = exps.shape[1], npts = points.shape[0]
    cdef Py_ssize_t a, k, i
    cdef i64 acc, term, e, x, j
    out = np.zeros(npts, dtype=np.int64)
    cdef i64[:] o = out
    with nogil:
        for a in range(npts):
            acc = 0
            for k in range(nterms):
                term = coeffs[k]
                for i in range(nv):
                    e = exps[k, i]
                    if e:
                        x = points[a, i]
                        for j in range(e):
                            term = term * x % p
                acc = (acc + term) % p
            o[a] = acc
    return out


cdef Py_ssize_t _rref_inplace(i64[:, :] m, i64 p, Py_ssize_t[:] pivots) nogil:
    cdef Py_ssize_t nr = m.shape[0], nc = m.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, pr
    cdef i64 inv, fac
    for c in range(nc):
        if r == nr:
            break
        pr = -1
        for i in range(r, nr):
            if m[i, c] % p:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            for j in range(nc):
                fac = m[r, j]
                m[r, j] = m[pr, j]
                m[pr, j] = fac
        inv = _inv(m[r, c] % p, p)
        for j in range(nc):
            m[r, j] = m[r, j] * inv % p
        for i in range(nr):
            if i != r:
                fac = m[i, c] % p
                if fac:
                    for j in range(nc):
                        m[i, j] = (m[i, j] - fac * m[r, j]) % p
                        if m[i, j] < 0:
                            m[i, j] += p
        pivots[r] = c
        r += 1
    return r


def rref_mod_p(a, i64 p):
    """Reduced row echelon form of a mod p; returns (matrix, pivot columns)."""
    m = np.mod(np.array(a, dtype=np.int64, copy=True), p)
    if m.ndim != 2:
        raise ValueError("expected a 2-d array")
    piv = np.zeros(max(m.shape[0], 1), dtype=np.intp)
    cdef i64[:, :] mv = m
    cdef Py_ssize_t[:] pv = piv
    cdef Py_ssize_t rank
    with nogil:
        rank = _rref_inplace(mv, p, pv)
    return m[:rank], [int(c) for c in piv[:rank]]


def rank_mod_p(a, i64 p):
    m = np.mod(np.array(a, dtype=np.int64, copy=True), p)
    piv = np.zeros(max(m.shape[0], 1), dtype=np.intp)
    cdef i64[:, :] mv = m
    cdef Py_ssize_t[:] pv = piv
    cdef Py_ssize_t rank
    with nogil:
        rank = _rref_inplace(mv, p, pv)
    return int(rank)


def batch_rank_mod_p(a, i64 p):
    """Ranks of a stack of matrices, shape (batch, rows, cols)."""
    m = np.mod(np.array(a, dtype=np.int64, copy=True), p)
    cdef Py_ssize_t nb = m.shape[0], b
    out = np.zeros(nb, dtype=np.int64)
    piv = np.zeros(max(m.shape[1], 1), dtype=np.intp)
    cdef i64[:, :, :] mv = m
    cdef i64[:] ov = out
    cdef Py_ssize_t[:] pv = piv
    with nogil:
        for b in range(nb):
            ov[b] = _rref_inplace(mv[b], p, pv)
    return out


def nullspace_mod_p(a, i64 p):
    """Basis of the right kernel of a mod p, one vector per row."""
    red, pivots = rref_mod_p(a, p)
    ncols = np.shape(a)[1]
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for row, pc in enumerate(pivots):
            basis[k, pc] = (-red[row, fc]) % p
    return basis


cdef i64 _det_inplace(i64[:, :] m, i64 p) nogil:
    cdef Py_ssize_t n = m.shape[0], c, i, j, pr
    cdef i64 d = 1, inv, fac
    for c in range(n):
        pr = -1
        for i in range(c, n):
            if m[i, c]:
                pr = i
                break
        if pr < 0:
            return 0
        if pr != c:
            for j in range(n):
                fac = m[c, j]
                m[c, j] = m[pr, j]
                m[pr, j] = fac
            d = p - d
        d = d * m[c, c] % p
        inv = _inv(m[c, c], p)
        for i in range(c + 1, n):
            fac = m[i, c] * inv % p
            if fac:
                for j in range(c, n):
                    m[i, j] = (m[i, j] - fac * m[c, j]) % p
                    if m[i, j] < 0:
                        m[i, j] += p
    return d % p


def batch_det_mod_p(a, i64 p):
    """Determinants of a stack of square matrices mod p."""
    m = np.mod(np.array(a, dtype=np.int64, copy=True), p)
    cdef Py_ssize_t nb = m.shape[0], b
    out = np.zeros(nb, dtype=np.int64)
    cdef i64[:, :, :] mv = m
    cdef i64[:] ov = out
    with nogil:
        for b in range(nb):
            ov[b] = _det_inplace(mv[b], p)
    return out
