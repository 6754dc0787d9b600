"""Slow reference implementations used only by the tests.

Each oracle takes a different route from the library code it checks: plain
FqPoly arithmetic instead of vectorised convolutions, direct rank scans
instead of the compiled Hankel kernel, explicit complex sums instead of
count vectors.
"""

import cmath
import itertools

import numpy as np

from arclab import ff
from arclab.expsum import MorInstance, eval_at
from arclab.poly import FqPoly, laurent_expand, monic_polys, polys_below


def g_tuple(inst: MorInstance, a) -> list[FqPoly]:
    p, d = inst.p, inst.d
    return [FqPoly(p, tuple(a[j * d:(j + 1) * d]) + (inst.P[j],)) for j in range(inst.n)]


def f_of_polys(inst: MorInstance, gs: list[FqPoly]) -> FqPoly:
    p = inst.p
    acc = FqPoly(p, ())
    for e, c in inst.f:
        term = FqPoly.const(p, c)
        for g, ei in zip(gs, e):
            term = term * (g ** ei)
        acc = acc + term
    return acc


def coeff_vector(inst: MorInstance, a) -> tuple:
    """(c_1..c_kd): c_r is the coefficient of T^(r-1) in f(g(a))."""
    F = f_of_polys(inst, g_tuple(inst, a))
    return tuple(F.coeff(r) for r in range(inst.kd))


def all_a(inst: MorInstance):
    return itertools.product(range(inst.p), repeat=inst.n * inst.d)


def count_mor(inst: MorInstance) -> int:
    return sum(1 for a in all_a(inst) if f_of_polys(inst, g_tuple(inst, a)).is_zero())


def value_counts(inst: MorInstance, b) -> tuple:
    """Distribution over a of sum_r b_r c_r(a)."""
    out = [0] * inst.p
    for a in all_a(inst):
        c = coeff_vector(inst, a)
        out[sum(x * y for x, y in zip(b, c)) % inst.p] += 1
    return tuple(out)


def charsum(p: int, values) -> complex:
    return sum(cmath.exp(2j * cmath.pi * (int(v) % p) / p) for v in values)


def hankel_level(b, p: int) -> int:
    """Least m with rank of the (L-m) x (m+1) Hankel matrix at most m, by direct scan."""
    L = len(b)
    for m in range(L + 1):
        rows = [[b[i + j] for j in range(m + 1)] for i in range(L - m)]
        if not rows or ff.rank_mod_p(rows, p) <= m:
            return m
    return L


def um_tails(p: int, L: int) -> dict:
    """tail -> chart degree, over all coprime (h1, h2) with deg h2 <= L/2."""
    out = {}
    for m in range(L // 2 + 1):
        for h2 in monic_polys(p, m):
            for h1 in polys_below(p, m):
                if m and (h1.is_zero() or naive_gcd_degree(h1, h2) > 0):
                    continue
                out.setdefault(laurent_expand(h1, h2, L)[1], m)
    return out


def naive_gcd_degree(a: FqPoly, b: FqPoly) -> int:
    """Degree of the largest monic common divisor, by trial division."""
    p = a.p
    top = min(a.degree, b.degree)
    for deg in range(top, 0, -1):
        for h in monic_polys(p, deg):
            if (a % h).is_zero() and (b % h).is_zero():
                return deg
    return 0


def residue_counts(inst: MorInstance, h1: FqPoly, h2: FqPoly) -> tuple:
    """Distribution over x in (F_p[T]/h2)^n of the T^-1 coefficient of h1 f(x) / h2."""
    p, m = inst.p, h2.degree
    out = [0] * p
    lead_inv = pow(h2.lead, -1, p)
    residues = list(polys_below(p, m))
    for xs in itertools.product(residues, repeat=inst.n):
        r = (h1 * f_of_polys(inst, list(xs))) % h2
        out[r.coeff(m - 1) * lead_inv % p] += 1
    return tuple(out)


def multilinear_count(Psi: np.ndarray, b, n: int, d: int, p: int) -> int:
    """Solutions (a1, a2) in (F_p^{d x n})^2 of the k = 3 bilinear system, by scanning a1."""
    b = np.asarray(b, dtype=np.int64)
    # D[i, i1, i2] = b_{i1 + i2 + i + 1}
    D = np.zeros((d, d, d), dtype=np.int64)
    for i, i1, i2 in itertools.product(range(d), repeat=3):
        D[i, i1, i2] = b[i + i1 + i2]
    grid = np.array(list(itertools.product(range(p), repeat=n * d)), dtype=np.int64).reshape(-1, d, n)
    total = 0
    for a1 in grid:
        # E[x, i, j] = sum Psi[j, j1, j2] D[i, i1, i2] a1[i1, j1] a2[x, i2, j2]
        E = np.einsum("abc,ief,eb,xfc->xia", Psi, D, a1, grid) % p
        total += int(np.all(E.reshape(len(grid), -1) == 0, axis=1).sum())
    return total


def form_charsum(G, N: int, p: int) -> complex:
    return charsum(p, (eval_at(G, x, p) for x in itertools.product(range(p), repeat=N)))


def short_vectors(gamma: np.ndarray, a: int, c: int, p: int) -> int:
    """#{x : deg x < a, gamma x has zero T^-1..T^-c coefficients}, via FqPoly products."""
    n = gamma.shape[0]
    prec = gamma.shape[2]
    rows = [[FqPoly(p, tuple(reversed(gamma[i, j].tolist()))) for j in range(n)] for i in range(n)]
    # T^prec * gamma_ij is the reversed tail; T^-t of gamma x sits at degree prec - t
    count = 0
    for coeffs in itertools.product(range(p), repeat=n * a):
        xs = [FqPoly(p, coeffs[j * a:(j + 1) * a]) for j in range(n)]
        ok = True
        for i in range(n):
            acc = FqPoly(p, ())
            for j in range(n):
                acc = acc + rows[i][j] * xs[j]
            if any(acc.coeff(prec - t) for t in range(1, c + 1)):
                ok = False
                break
        count += ok
    return count
