"""Polynomial lattices over F_p[T]: successive minima, Lee's count, shrinking.

gamma is a symmetric n x n matrix whose entries are Laurent tails
sum_{r=1}^{prec} g_r T^-r, stored as an int array of shape (n, n, prec).
Lattices are given by 2n x 2n bases with Laurent-monomial blocks; after
multiplying by T^M the basis is a polynomial matrix, which is column-reduced
(leading-coefficient matrix of the column degrees nonsingular). Column
degrees of a reduced basis are the successive-minima exponents.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import arcs, ff
from .poly import FqPoly


class PrecisionError(ValueError):
    pass


@dataclass(frozen=True)
class PolyLattice:
    p: int
    dim: int
    basis: tuple  # columns, each a tuple of FqPoly (entries of T^shift * basis)
    shift: int
    minima: tuple  # sorted exponents rho_i

    @property
    def column_degrees(self) -> tuple:
        return tuple(max(e.degree for e in col) for col in self.basis)


def random_gamma(n: int, prec: int, p: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.integers(0, p, size=(n, n, prec))
    upper = np.triu(np.ones((n, n), dtype=bool))
    g = np.where(upper[:, :, None], g, 0)
    return g + np.where(upper[:, :, None] & ~np.eye(n, dtype=bool)[:, :, None], g, 0).transpose(1, 0, 2)


def _check_gamma(gamma: np.ndarray) -> None:
    if gamma.ndim != 3 or gamma.shape[0] != gamma.shape[1]:
        raise ValueError("gamma must have shape (n, n, prec)")
    if not np.array_equal(gamma, gamma.transpose(1, 0, 2)):
        raise ValueError("gamma must be symmetric")


def _tail_poly(tail, shift: int, p: int) -> FqPoly:
    """T^shift * sum tail[r-1] T^-r as a polynomial (requires shift >= len(tail))."""
    L = len(tail)
    if shift < L:
        raise PrecisionError("shift too small to clear denominators")
    coeffs = [0] * (shift + 1)
    for r in range(1, L + 1):
        coeffs[shift - r] = int(tail[r - 1])
    return FqPoly(p, tuple(coeffs))


def _build(blocks, n: int, p: int, shift: int) -> list[list[FqPoly]]:
    """Assemble columns from a function (row, col) -> FqPoly."""
    return [[blocks(i, j) for i in range(2 * n)] for j in range(2 * n)]


def lambda_basis(gamma: np.ndarray, a: int, c: int, p: int) -> tuple[list[list[FqPoly]], int]:
    """Columns of T^M * [[T^-a I, 0], [T^c gamma, T^c I]] and the shift M."""
    _check_gamma(gamma)
    n, _, prec = gamma.shape
    M = max(a, prec - c, 0)
    zero = FqPoly(p, ())

    def entry(i: int, j: int) -> FqPoly:
        if i < n and j < n:
            return FqPoly.monomial(p, M - a) if i == j else zero
        if i < n:
            return zero
        if j < n:
            return _tail_poly(gamma[i - n, j], M + c, p)
        return FqPoly.monomial(p, M + c) if i == j else zero

    return _build(entry, n, p, M), M


def dual_basis(gamma: np.ndarray, a: int, c: int, p: int) -> tuple[list[list[FqPoly]], int]:
    """Columns of T^M * [[T^c I, -T^c gamma], [0, T^-a I]] = T^M T^(c-a) Lambda^-T."""
    _check_gamma(gamma)
    n, _, prec = gamma.shape
    M = max(a, prec - c, 0)
    zero = FqPoly(p, ())

    def entry(i: int, j: int) -> FqPoly:
        if i < n and j < n:
            return FqPoly.monomial(p, M + c) if i == j else zero
        if i < n:
            return -_tail_poly(gamma[i, j - n], M + c, p)
        if j < n:
            return zero
        return FqPoly.monomial(p, M - a) if i == j else zero

    return _build(entry, n, p, M), M


def column_reduce(cols: list[list[FqPoly]], p: int) -> list[list[FqPoly]]:
    """Column-reduced basis of the same F_p[T]-module (unimodular column operations)."""
    cols = [list(c) for c in cols]
    dim = len(cols)
    for _ in range(10_000):
        degs = [max(e.degree for e in col) for col in cols]
        if min(degs) < 0:
            raise ValueError("singular basis (zero column)")
        lead = [[col[i].coeff(degs[j]) for j, col in enumerate(cols)] for i in range(dim)]
        ker = ff.nullspace_mod_p(lead, dim, p)
        if not ker:
            return cols
        v = ker[0]
        # the column of largest degree in the relation gets cancelled
        j0 = max((j for j in range(dim) if v[j]), key=lambda j: (degs[j], j))
        inv = pow(v[j0], -1, p)
        new = [FqPoly(p, ()) for _ in range(dim)]
        for j in range(dim):
            if v[j]:
                mult = FqPoly.monomial(p, degs[j0] - degs[j], v[j] * inv)
                new = [x + mult * y for x, y in zip(new, cols[j])]
        cols[j0] = new
    raise RuntimeError("column reduction did not terminate")  # pragma: no cover


def _minima(cols, shift: int, p: int) -> PolyLattice:
    red = column_reduce(cols, p)
    degs = sorted(max(e.degree for e in col) - shift for col in red)
    return PolyLattice(p, len(cols), tuple(tuple(c) for c in red), shift, tuple(degs))


def lattice_minima(gamma: np.ndarray, a: int, c: int, p: int) -> PolyLattice:
    cols, M = lambda_basis(gamma, a, c, p)
    return _minima(cols, M, p)


def dual_minima(gamma: np.ndarray, a: int, c: int, p: int) -> PolyLattice:
    cols, M = dual_basis(gamma, a, c, p)
    return _minima(cols, M, p)


def lee_count(minima, p: int) -> int:
    """prod max(1, p^-rho)."""
    out = 1
    for r in minima:
        if r < 0:
            out *= p ** (-r)
    return out


def count_short(gamma: np.ndarray, a: int, c: int, p: int, max_enum: int | None = None) -> int:
    """#{x in F_p[T]^n : deg x < a, gamma x has no T^-1..T^-c terms}, by enumeration."""
    _check_gamma(gamma)
    n, _, prec = gamma.shape
    if a <= 0:
        return 1
    if c <= 0:
        return p ** (n * a)
    if a + c - 1 > prec:
        raise PrecisionError(f"window needs precision {a + c - 1}, have {prec}")
    arcs.guard(p ** (n * a), max_enum, "short vector enumeration")
    # coefficient of T^-t in row i of gamma x is sum_j sum_e x_{j,e} gamma_{ij, e+t}
    lin = np.zeros((n * a, n * c), dtype=np.int64)
    for j in range(n):
        for e in range(a):
            for i in range(n):
                for t in range(1, c + 1):
                    lin[j * a + e, i * c + t - 1] = gamma[i, j, e + t - 1]
    idx = np.arange(p ** (n * a), dtype=np.int64)
    X = np.stack([(idx // p ** s) % p for s in range(n * a)], axis=1)
    return int(np.all((X @ lin) % p == 0, axis=1).sum())


def shrink_bound_exponent(n: int, a: int, c: int, s: int) -> int:
    return n * s + n * max((a - c) // 2, 0)


def shrink_check(gamma: np.ndarray, a: int, c: int, s: int, p: int,
                 max_enum: int | None = None) -> dict:
    if c <= 0 or s < 0:
        raise ValueError("need c > 0 and s >= 0")
    n = gamma.shape[0]
    big = count_short(gamma, a, c, p, max_enum)
    small = count_short(gamma, a - s, c + s, p, max_enum)
    expo = shrink_bound_exponent(n, a, c, s)
    return {"a": a, "c": c, "s": s, "count": big, "count_shrunk": small, "exponent": expo,
            "passed": big <= small * p ** expo}


def lattice_suite(gamma: np.ndarray, a: int, c: int, s: int, p: int) -> dict:
    """Lee's formula against enumeration, duality of minima, and the shrinking bound."""
    lam = lattice_minima(gamma, a, c, p)
    dual = dual_minima(gamma, a, c, p)
    dim = lam.dim
    lee = lee_count(lam.minima, p)
    brute = count_short(gamma, a, c, p)
    duality = all(lam.minima[i] + dual.minima[dim - 1 - i] == c - a for i in range(dim))
    shrink = shrink_check(gamma, a, c, s, p)
    return {"a": a, "c": c, "s": s, "minima": list(lam.minima), "dual_minima": list(dual.minima),
            "lee": lee, "brute": brute, "lee_ok": lee == brute, "duality_ok": duality,
            "shrink": shrink, "passed": lee == brute and duality and shrink["passed"]}


def random_cases(count: int, p: int, prec: int, seed: int, max_param: int = 3):
    """Deterministic stream of (gamma, a, c, s) with n in {1, 2} and a, c, s <= max_param."""
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(1, 3))
        a = int(rng.integers(1, max_param + 1))
        c = int(rng.integers(1, max_param + 1))
        s = int(rng.integers(0, min(a, max_param) + 1))
        yield random_gamma(n, prec, p, rng), a, c, s


__all__ = ["PolyLattice", "PrecisionError", "count_short", "dual_minima", "lattice_minima",
           "lattice_suite", "lee_count", "random_cases", "shrink_check"]
