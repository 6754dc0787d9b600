"""Prime fields, value distributions and their character sums.

A :class:`CountVector` is the exact distribution of values of a function into
F_p. Everything downstream compares these exactly; complex character sums are
only evaluated on demand, for reporting.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, -1, self.p)

    def elements(self) -> range:
        return range(self.p)


def psi(p: int, x: int) -> complex:
    """Standard additive character x -> exp(2 pi i x / p)."""
    return cmath.exp(2j * cmath.pi * (x % p) / p)


@dataclass(frozen=True)
class CountVector:
    """counts[t] = number of inputs mapped to t in F_p."""

    p: int
    counts: tuple

    def __post_init__(self):
        if len(self.counts) != self.p:
            raise ValueError("CountVector needs exactly p entries")
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))

    @classmethod
    def from_values(cls, p: int, values, weights=None) -> "CountVector":
        vals = np.asarray(values, dtype=np.int64).reshape(-1) % p
        if weights is None:
            return cls(p, tuple(np.bincount(vals, minlength=p).tolist()))
        w = np.asarray(weights, dtype=np.int64).reshape(-1)
        out = [0] * p
        for t in range(p):
            out[t] = int(w[vals == t].sum())
        return cls(p, tuple(out))

    @classmethod
    def delta(cls, p: int, t: int = 0, weight: int = 1) -> "CountVector":
        c = [0] * p
        c[t % p] = weight
        return cls(p, tuple(c))

    @classmethod
    def zero(cls, p: int) -> "CountVector":
        return cls(p, (0,) * p)

    @property
    def total(self) -> int:
        return sum(self.counts)

    def __add__(self, other: "CountVector") -> "CountVector":
        _same_p(self, other)
        return CountVector(self.p, tuple(a + b for a, b in zip(self.counts, other.counts)))

    def __sub__(self, other: "CountVector") -> "CountVector":
        _same_p(self, other)
        return CountVector(self.p, tuple(a - b for a, b in zip(self.counts, other.counts)))

    def scale(self, c: int) -> "CountVector":
        return CountVector(self.p, tuple(c * a for a in self.counts))

    def dilate(self, lam: int) -> "CountVector":
        """Distribution of lam * f, for lam in F_p^x."""
        lam %= self.p
        if lam == 0:
            raise ValueError("dilation by 0")
        out = [0] * self.p
        for t, c in enumerate(self.counts):
            out[t * lam % self.p] += c
        return CountVector(self.p, tuple(out))

    def to_json(self) -> dict:
        return {"p": self.p, "counts": list(self.counts)}


def _same_p(a: CountVector, b: CountVector) -> None:
    if a.p != b.p:
        raise ValueError("CountVectors over different fields")


def charsum_eval(cv: CountVector, j: int = 1) -> complex:
    """sum_t counts[t] * psi(j t); j = 0 (the trivial character) is rejected."""
    if j % cv.p == 0:
        raise ValueError("charsum_eval needs a nontrivial character (j != 0 mod p)")
    return sum(c * psi(cv.p, j * t) for t, c in enumerate(cv.counts) if c)


def is_uniform(cv: CountVector) -> bool:
    """True iff every nontrivial character sum of cv vanishes.

    Over a prime field the characters psi(j.) for j != 0 are Galois conjugate,
    and 1 + zeta + ... + zeta^(p-1) is the only rational relation, so this is
    equivalent to all counts being equal.
    """
    return len(set(cv.counts)) == 1


def same_charsums(a: CountVector, b: CountVector) -> bool:
    """Do a and b have equal character sums for every nontrivial character?"""
    return is_uniform(a - b)


def convolve(a: CountVector, b: CountVector) -> CountVector:
    """Distribution of f + g for independent inputs of f and g."""
    _same_p(a, b)
    p = a.p
    out = [0] * p
    for s, x in enumerate(a.counts):
        if x:
            for t, y in enumerate(b.counts):
                out[(s + t) % p] += x * y
    return CountVector(p, tuple(out))


def sum_cvs(p: int, cvs: Iterable[CountVector]) -> CountVector:
    acc = [0] * p
    for cv in cvs:
        for t, c in enumerate(cv.counts):
            acc[t] += c
    return CountVector(p, tuple(acc))


# -- modular linear algebra -------------------------------------------------

def rref_mod_p(mat: Sequence[Sequence[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form and pivot columns, mod p."""
    rows = [[int(v) % p for v in r] for r in mat]
    ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [v * inv % p for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank_mod_p(mat, p: int) -> int:
    mat = [list(r) for r in mat]
    if not mat or not mat[0]:
        return 0
    return len(rref_mod_p(mat, p)[1])


def nullspace_mod_p(mat: Sequence[Sequence[int]], ncols: int, p: int) -> list[list[int]]:
    """Basis of {x : mat x = 0} over F_p."""
    if not mat:
        return [[int(i == j) for i in range(ncols)] for j in range(ncols)]
    rows, pivots = rref_mod_p(mat, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][fc] % p
        basis.append(v)
    return basis


# -- the quadratic extension F_{p^2} ----------------------------------------

def quadratic_nonresidue(p: int) -> int:
    """Least r with x^2 - r irreducible over F_p (p odd)."""
    if p == 2:
        raise ValueError("use x^2 + x + 1 for p = 2")
    squares = {x * x % p for x in range(p)}
    return next(r for r in range(2, p) if r not in squares)


class Fp2:
    """Vectorised arithmetic in F_p[w]/(w^2 - r); elements are (re, im) int arrays."""

    def __init__(self, p: int):
        if p == 2:
            raise ValueError("Fp2 supports odd p only")
        self.p = p
        self.r = quadratic_nonresidue(p)

    def elements(self) -> tuple[np.ndarray, np.ndarray]:
        idx = np.arange(self.p * self.p, dtype=np.int64)
        return idx % self.p, idx // self.p

    def add(self, a, b):
        return (a[0] + b[0]) % self.p, (a[1] + b[1]) % self.p

    def mul(self, a, b):
        p, r = self.p, self.r
        return ((a[0] * b[0] + r * (a[1] * b[1] % p)) % p,
                (a[0] * b[1] + a[1] * b[0]) % p)

    def power(self, a, e: int):
        one = (np.ones_like(a[0]), np.zeros_like(a[1]))
        out, base = one, a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def scalar(self, c: int, like):
        return (np.full_like(like, c % self.p), np.zeros_like(like))

    def inv(self, a: tuple[int, int]) -> tuple[int, int]:
        # (x + y w)^-1 = (x - y w) / (x^2 - r y^2)
        x, y = a[0] % self.p, a[1] % self.p
        nrm = (x * x - self.r * y * y) % self.p
        if nrm == 0:
            raise ZeroDivisionError("inverse of 0 in F_p^2")
        ninv = pow(nrm, -1, self.p)
        return x * ninv % self.p, -y * ninv % self.p

    def rank(self, mat: list[list[tuple[int, int]]]) -> int:
        """Rank of a small matrix with F_p^2 entries."""
        p = self.p
        rows = [[(a % p, b % p) for a, b in r] for r in mat]
        if not rows:
            return 0
        ncols = len(rows[0])
        rk = 0

        def mul(u, v):
            return ((u[0] * v[0] + self.r * u[1] * v[1]) % p, (u[0] * v[1] + u[1] * v[0]) % p)

        for c in range(ncols):
            piv = next((i for i in range(rk, len(rows)) if rows[i][c] != (0, 0)), None)
            if piv is None:
                continue
            rows[rk], rows[piv] = rows[piv], rows[rk]
            inv = self.inv(rows[rk][c])
            rows[rk] = [mul(v, inv) for v in rows[rk]]
            for i in range(rk + 1, len(rows)):
                f = rows[i][c]
                if f != (0, 0):
                    rows[i] = [((a[0] - m[0]) % p, (a[1] - m[1]) % p)
                               for a, m in zip(rows[i], (mul(f, v) for v in rows[rk]))]
            rk += 1
            if rk == len(rows):
                break
        return rk
