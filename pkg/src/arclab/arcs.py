"""Arc levels of Laurent tails and the strata A_m - A_{m-1}, U_m.

A tail b = (b_1..b_L) lies in A_m when the (L-m) x (m+1) Hankel matrix
(b_{i+j-1}) has rank <= m; its level is the least such m. U_m is the part of
A_m that is exactly a ratio h1/h2 with deg h2 = m up to O(T^-(L+1)).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .poly import FqPoly, RationalApprox, laurent_expand, rational_reconstruct

MAX_ENUM = 10 ** 8


class EnumerationTooLarge(ValueError):
    pass


def guard(size: int, limit: int | None = None, what: str = "enumeration") -> None:
    limit = MAX_ENUM if limit is None else limit
    if size > limit:
        raise EnumerationTooLarge(f"{what} of size {size} exceeds the limit {limit}")


def hankel_rank(b, m: int, p: int) -> int:
    L = len(b)
    if not 0 <= m < L:
        raise ValueError(f"m={m} outside [0, {L})")
    mat = [[b[i + j] for j in range(m + 1)] for i in range(L - m)]
    return kernels.rank_mod_p(mat, p)


def arc_level(b, p: int) -> int:
    return int(kernels.hankel_levels(np.asarray([b], dtype=np.int64), p)[0])


def max_chart_level(L: int) -> int:
    """Charts are produced for m <= L/2; beyond that U_m is empty."""
    return L // 2


@dataclass(frozen=True)
class UmChart:
    m: int
    h1: FqPoly
    h2: FqPoly


def in_Um(b, p: int) -> UmChart | None:
    """Chart (h1, h2) with b = h1/h2 + O(T^-(L+1)), deg h2 = level, or None."""
    b = tuple(int(v) % p for v in b)
    L = len(b)
    m = arc_level(b, p)
    if m > max_chart_level(L):
        return None
    approx = rational_reconstruct(b, m, p)
    if approx is None or approx.m_prime != m:
        return None
    return UmChart(m, approx.h1, approx.h2)


def in_Um_fast(levels_full: np.ndarray, levels_trunc: np.ndarray, L: int) -> np.ndarray:
    """U_m membership from levels of b and of its truncation (b_1..b_{L-1}).

    For level m <= L/2, b is in U_m iff the truncated tail does not already
    lie at a level below m.
    """
    lf = np.asarray(levels_full)
    lt = np.asarray(levels_trunc)
    ok = lf <= max_chart_level(L)
    return ok & ((lf == 0) | (lt >= lf))


def all_tails(p: int, L: int, max_enum: int | None = None) -> np.ndarray:
    """Every tail in F_p^L as rows; column r-1 holds b_r, b_1 varies fastest."""
    guard(p ** L, max_enum, "tail enumeration")
    idx = np.arange(p ** L, dtype=np.int64)
    return np.stack([(idx // p ** r) % p for r in range(L)], axis=1)


def tail_index(b, p: int) -> int:
    return int(sum(int(v) % p * p ** r for r, v in enumerate(b)))


def _blocks(n: int, workers: int, min_block: int = 4096):
    nblk = max(1, min(max(workers, 1) * 4, -(-n // min_block)))
    edges = np.linspace(0, n, nblk + 1).astype(int)
    return [(int(a), int(c)) for a, c in zip(edges[:-1], edges[1:]) if c > a]


def levels_parallel(tails: np.ndarray, p: int, workers: int = 1) -> np.ndarray:
    """Hankel levels of many tails, split into blocks merged in order."""
    blocks = _blocks(len(tails), workers)
    if workers <= 1 or len(blocks) == 1:
        return kernels.hankel_levels(tails, p)
    with ThreadPoolExecutor(max_workers=workers) as ex:
        parts = list(ex.map(lambda be: kernels.hankel_levels(tails[be[0]:be[1]], p), blocks))
    return np.concatenate(parts)


@dataclass(frozen=True)
class Classification:
    p: int
    L: int
    tails: np.ndarray
    level: np.ndarray
    in_um: np.ndarray


def classify_all(p: int, L: int, workers: int = 1, max_enum: int | None = None) -> Classification:
    tails = all_tails(p, L, max_enum)
    lev = levels_parallel(tails, p, workers)
    if L > 1:
        trunc = levels_parallel(np.ascontiguousarray(tails[:, :L - 1]), p, workers)
    else:
        trunc = np.zeros(len(tails), dtype=np.int64)
    return Classification(p, L, tails, lev, in_Um_fast(lev, trunc, L))


def enumerate_strata(p: int, L: int, workers: int = 1, max_enum: int | None = None) -> list[dict]:
    """Rows (m, #(A_m - A_{m-1}), #U_m) for m = 0..ceil(L/2)."""
    cl = classify_all(p, L, workers, max_enum)
    rows = []
    for m in range((L + 1) // 2 + 1):
        sel = cl.level == m
        rows.append({"m": m, "card_stratum": int(sel.sum()), "card_Um": int((sel & cl.in_um).sum())})
    return rows


def predicted_Um(p: int, m: int) -> int:
    return 1 if m == 0 else p ** (2 * m) - p ** (2 * m - 1)


def chart_points(p: int, m: int, L: int):
    """Every coprime (h1, h2), h2 monic of degree m, deg h1 < m, with its tail."""
    from .poly import monic_polys, poly_gcd, polys_below

    for h2 in monic_polys(p, m):
        for h1 in polys_below(p, m):
            if m and (h1.is_zero() or poly_gcd(h1, h2).degree > 0):
                continue
            yield h1, h2, laurent_expand(h1, h2, L)[1]


def roundtrip_chart(chart: UmChart, L: int) -> tuple:
    return laurent_expand(chart.h1, chart.h2, L)[1]


__all__ = [
    "EnumerationTooLarge", "MAX_ENUM", "UmChart", "arc_level", "classify_all",
    "enumerate_strata", "hankel_rank", "in_Um", "in_Um_fast", "predicted_Um",
    "RationalApprox",
]
