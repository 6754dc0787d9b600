"""Pure-Python / numpy versions of the compiled kernels (same algorithms)."""

from __future__ import annotations

import itertools

import numpy as np


def _rank_rows(rows: list[list[int]], ncols: int, p: int) -> int:
    rows = [[v % p for v in r] for r in rows]
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [v * inv % p for v in rows[r]]
        for i in range(r + 1, len(rows)):
            f = rows[i][c]
            if f:
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def rank_mod_p(mat, p: int) -> int:
    mat = np.asarray(mat, dtype=np.int64)
    if mat.size == 0:
        return 0
    return _rank_rows(mat.tolist(), mat.shape[1], p)


def hankel_levels(tails, p: int) -> np.ndarray:
    tails = np.asarray(tails, dtype=np.int64) % p
    nb, L = tails.shape
    out = np.full(nb, (L + 1) // 2, dtype=np.int64)
    for b in range(nb):
        t = tails[b].tolist()
        for m in range((L + 1) // 2):
            rows = [t[i:i + m + 1] for i in range(L - m)]
            if _rank_rows(rows, m + 1, p) <= m:
                out[b] = m
                break
    return out


def multilinear_zero_count(tensor, nvar: int, nfac: int, p: int) -> int:
    tensor = np.asarray(tensor, dtype=np.int64) % p
    neq = tensor.shape[0]
    # outer multi-index (i_1..i_{r-1}) against the last factor i_r
    shaped = tensor.reshape(neq, nvar ** (nfac - 1), nvar)
    grid = _grid(p, nvar)
    total = 0
    for zs in itertools.product(range(len(grid)), repeat=nfac - 1):
        weight = np.ones(1, dtype=np.int64)
        for z in zs:
            weight = np.outer(weight, grid[z]).ravel() % p
        mat = np.einsum("o,eoi->ei", weight, shaped) % p
        total += p ** (nvar - _rank_rows(mat.tolist(), nvar, p))
    return total


def _grid(p: int, nvar: int) -> np.ndarray:
    idx = np.arange(p ** nvar, dtype=np.int64)
    return np.stack([(idx // p ** i) % p for i in range(nvar)], axis=1)


def poly_value_table(exps, coeffs, nvar: int, p: int) -> np.ndarray:
    exps = np.asarray(exps, dtype=np.int64).reshape(-1, nvar)
    coeffs = np.asarray(coeffs, dtype=np.int64) % p
    npts = p ** nvar
    idx = np.arange(npts, dtype=np.int64)
    pts = np.stack([(idx // p ** i) % p for i in range(nvar)], axis=1)
    out = np.zeros(npts, dtype=np.int64)
    for e, c in zip(exps, coeffs):
        term = np.full(npts, c, dtype=np.int64)
        for i in range(nvar):
            if e[i]:
                term = term * _powmod(pts[:, i], int(e[i]), p) % p
        out = (out + term) % p
    return out


def _powmod(v: np.ndarray, e: int, p: int) -> np.ndarray:
    table = np.array([pow(x, e, p) for x in range(p)], dtype=np.int64)
    return table[v]
