"""Pure numpy fallback for the compiled mod-p kernels (same API)."""

from __future__ import annotations

import numpy as np


def _powmod(x: np.ndarray, e: int, p: int) -> np.ndarray:
    r = np.ones_like(x)
    base = x % p
    while e:
        if e & 1:
            r = r * base % p
        base = base * base % p
        e >>= 1
    return r


def eval_poly_mod_p(exps, coeffs, points, p: int) -> np.ndarray:
    exps = np.asarray(exps, dtype=np.int64)
    coeffs = np.asarray(coeffs, dtype=np.int64)
    points = np.asarray(points, dtype=np.int64) % p
    out = np.zeros(points.shape[0], dtype=np.int64)
    cache: dict[tuple[int, int], np.ndarray] = {}
    for k in range(exps.shape[0]):
        term = np.full(points.shape[0], coeffs[k] % p, dtype=np.int64)
        for i, e in enumerate(exps[k]):
            if e:
                key = (i, int(e))
                if key not in cache:
                    cache[key] = _powmod(points[:, i], int(e), p)
                term = term * cache[key] % p
        out = (out + term) % p
    return out


def rref_mod_p(a, p: int):
    m = np.array(a, dtype=np.int64) % p
    nr, nc = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            m[[r, pr]] = m[[pr, r]]
        inv = pow(int(m[r, c]), -1, p)
        m[r] = m[r] * inv % p
        fac = m[:, c].copy()
        fac[r] = 0
        rows = np.nonzero(fac)[0]
        if rows.size:
            m[rows] = (m[rows] - fac[rows, None] * m[r]) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank_mod_p(a, p: int) -> int:
    return len(rref_mod_p(a, p)[1])


def batch_rank_mod_p(a, p: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    return np.array([rank_mod_p(m, p) for m in a], dtype=np.int64)


def nullspace_mod_p(a, p: int) -> np.ndarray:
    red, pivots = rref_mod_p(a, p)
    ncols = np.shape(a)[1]
    pset = set(pivots)
    free = [c for c in range(ncols) if c not in pset]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for row, pc in enumerate(pivots):
            basis[k, pc] = (-red[row, fc]) % p
    return basis


def batch_det_mod_p(a, p: int) -> np.ndarray:
    m = np.array(a, dtype=np.int64) % p
    nb, n, _ = m.shape
    d = np.ones(nb, dtype=np.int64)
    for c in range(n):
        for b in range(nb):
            if d[b] == 0:
                continue
            nz = np.nonzero(m[b, c:, c])[0]
            if nz.size == 0:
                d[b] = 0
                continue
            pr = c + int(nz[0])
            if pr != c:
                m[b, [c, pr]] = m[b, [pr, c]]
                d[b] = (p - d[b]) % p
            d[b] = d[b] * m[b, c, c] % p
            inv = pow(int(m[b, c, c]), -1, p)
            fac = m[b, c + 1:, c] * inv % p
            m[b, c + 1:, c:] = (m[b, c + 1:, c:] - fac[:, None] * m[b, c, c:]) % p
    return d % p
