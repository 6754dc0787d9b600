"""First page of the configuration-space spectral sequence, exactly.

Dimensions come from the generating series prod_k (1 - q U^k)^(-e_k(N)) with
e_k the "necklace" exponents of -(-1)^n N. All arithmetic is in Python ints or
Fractions; there is no floating point anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("mobius needs n >= 1")
    res, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            res = -res
        p += 1
    return -res if m > 1 else res


def divisors(n: int) -> list[int]:
    return [i for i in range(1, n + 1) if n % i == 0]


def e_seq(N: int, n: int, K: int) -> list[int]:
    """[e_1, .., e_K]; only the parity of n matters."""
    x = (-1) ** (n % 2) * N
    out = []
    for k in range(1, K + 1):
        s = sum(mobius(dd) * x ** (k // dd) for dd in divisors(k))
        if s % k:
            raise ArithmeticError("necklace sum not divisible")  # cannot happen
        out.append(-s // k)
    return out


def gen_binom(a: int, j: int) -> int:
    """a choose j for any integer a."""
    num = 1
    for i in range(j):
        num *= a - i
    den = 1
    for i in range(2, j + 1):
        den *= i
    return num // den


def inv_power_series(e: int, J: int) -> list[int]:
    """Coefficients of (1 - x)^(-e) up to x^J."""
    return [gen_binom(-e, j) * (-1) ** j for j in range(J + 1)]


@dataclass
class BettiSeries:
    """Truncated bivariate series sum c[(i, m)] q^i U^m, exact to U^max_m."""

    max_m: int
    coeffs: dict = field(default_factory=dict)

    def coeff(self, i: int, m: int) -> int:
        if m > self.max_m:
            raise ValueError(f"series only known to U^{self.max_m}")
        return self.coeffs.get((i, m), 0)

    def __mul__(self, other: "BettiSeries") -> "BettiSeries":
        M = min(self.max_m, other.max_m)
        out: dict = {}
        for (i1, m1), c1 in self.coeffs.items():
            for (i2, m2), c2 in other.coeffs.items():
                if m1 + m2 <= M:
                    key = (i1 + i2, m1 + m2)
                    out[key] = out.get(key, 0) + c1 * c2
        return BettiSeries(M, {k: v for k, v in out.items() if v})


def pconf_series(N: int, n: int, max_m: int) -> BettiSeries:
    """prod_{k=1}^{max_m} (1 - q U^k)^(-e_k(N)) truncated at U^max_m."""
    es = e_seq(N, n, max_m)
    acc = BettiSeries(max_m, {(0, 0): 1})
    for k, e in enumerate(es, start=1):
        J = max_m // k
        fac = BettiSeries(max_m, {(j, j * k): c for j, c in enumerate(inv_power_series(e, J)) if c})
        acc = acc * fac
    return acc


def pconf_index(m: int, s: int, n: int) -> int:
    """Exponent of q attached to the page entry (m, s)."""
    return s + m * n - m


def page_s(m: int, i: int, n: int) -> int:
    return i - m * n + m


def pconf_invariant_dim(m: int, i: int, n: int, N: int, series: BettiSeries | None = None) -> int:
    series = series or pconf_series(N, n, m)
    return (-1) ** (m * n + i) * series.coeff(i, m)


def prim_dim(m: int, k: int) -> int:
    """Primitive middle cohomology of a smooth degree-k hypersurface in P^m."""
    return ((k - 1) ** (m + 1) + (-1) ** (m + 1) * (k - 1)) // k


def middle_betti(n: int, k: int) -> int:
    """N = rank of H^{n-1}_c of the smooth affine hypersurface with smooth
    hyperplane section at infinity: prim(n, k) + prim(n-1, k) = (k-1)^n."""
    return prim_dim(n, k) + prim_dim(n - 1, k)


@dataclass(frozen=True)
class E1Page:
    n: int
    k: int
    d: int
    N: int
    entries: dict  # (m, s) -> dim, nonzero only

    def dim(self, m: int, s: int) -> int:
        return self.entries.get((m, s), 0)

    def twist(self, m: int) -> int:
        return self.k * self.d - m - self.n * (self.d - m)

    def support(self) -> list[tuple[int, int]]:
        return sorted(self.entries)

    def antidiagonal(self, j: int) -> int:
        """sum of dims with m + s = -j."""
        return sum(v for (m, s), v in self.entries.items() if m + s == -j)

    def s_range(self) -> tuple[int, int]:
        lo = min((s for _, s in self.entries), default=0)
        return lo, 0


def e1_page(n: int, k: int, d: int) -> E1Page:
    N = middle_betti(n, k)
    series = pconf_series(N, n, d)
    entries = {}
    for m in range(d + 1):
        for i in range(m + 1):
            v = pconf_invariant_dim(m, i, n, N, series)
            if v:
                entries[(m, page_s(m, i, n))] = v
    return E1Page(n, k, d, N, entries)


def in_support(m: int, s: int, n: int) -> bool:
    if m == 0:
        return s == 0
    return m >= 1 and -m * (n - 1) + 1 <= s <= -m * (n - 2)


# -- independent route: character of the configuration space -------------------

def _poly_mul(a: tuple, b: tuple, q: int) -> tuple:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % q
    return tuple(out)


def monic_irreducibles(q: int, max_deg: int) -> dict[int, list[tuple]]:
    """Monic irreducibles over F_q (q prime) by degree, via a sieve on products."""
    import itertools

    irr: dict[int, list[tuple]] = {}
    for deg in range(1, max_deg + 1):
        reducible = set()
        # products of an irreducible of degree e <= deg/2 with any monic of degree deg - e
        for e in range(1, deg // 2 + 1):
            for g in irr[e]:
                for low in itertools.product(range(q), repeat=deg - e):
                    h = tuple(low) + (1,)
                    reducible.add(_poly_mul(g, h, q))
        irr[deg] = [tuple(low) + (1,) for low in itertools.product(range(q), repeat=deg)
                    if tuple(low) + (1,) not in reducible]
    return irr


def squarefree_with_omega(q: int, m: int):
    """Yield (f, omega(f)) for every monic squarefree f of degree m over F_q."""
    irr = monic_irreducibles(q, m) if m else {}
    flat = [(deg, g) for deg in sorted(irr) for g in irr[deg]]

    def rec(start: int, remaining: int, acc: tuple, w: int):
        if remaining == 0:
            yield acc, w
            return
        for idx in range(start, len(flat)):
            deg, g = flat[idx]
            if deg > remaining:
                break
            yield from rec(idx + 1, remaining - deg, _poly_mul(acc, g, q), w + 1)

    yield from rec(0, m, (1,), 0)


@lru_cache(maxsize=None)
def omega_profile(q: int, m: int) -> tuple:
    """profile[w] = number of monic squarefree f of degree m with w prime factors."""
    out = [0] * (m + 1)
    for _, w in squarefree_with_omega(q, m):
        out[w] += 1
    return tuple(out)


def pconf_character_value(m: int, n: int, N: int, q: int) -> int:
    base = (-1) ** (n - 1) * N
    sign = (-1) ** ((n - 1) * m)
    return sign * sum(c * base ** w for w, c in enumerate(omega_profile(q, m)))


def _interpolate(xs: list[int], ys: list[int]) -> list[Fraction]:
    """Coefficients (low first) of the interpolating polynomial."""
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i in range(n):
        basis = [Fraction(1)]
        den = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for t in range(len(basis) - 1):
                basis[t] -= xs[j] * basis[t + 1]
            den *= xs[i] - xs[j]
        for t in range(n):
            coeffs[t] += ys[i] * basis[t] / den
    return coeffs


DEFAULT_PRIMES = (2, 3, 5, 7, 11, 13)


def pconf_character_oracle(m: int, n: int, N: int, primes=DEFAULT_PRIMES) -> list[int]:
    """Coefficients of the degree-m character polynomial in q, by interpolation.

    Uses the first m+1 primes; the rest must agree with the fitted polynomial.
    """
    primes = list(primes)
    if len(primes) < m + 1:
        raise ValueError(f"need at least {m + 1} primes")
    vals = [pconf_character_value(m, n, N, q) for q in primes]
    coeffs = _interpolate(primes[:m + 1], vals[:m + 1])
    if any(c.denominator != 1 for c in coeffs):
        raise ArithmeticError("non-integral interpolation")
    ints = [int(c) for c in coeffs]
    for q, v in zip(primes[m + 1:], vals[m + 1:]):
        if sum(c * q ** i for i, c in enumerate(ints)) != v:
            raise ArithmeticError(f"character value at q={q} disagrees with the fit")
    return ints


def oracle_dims(m: int, n: int, N: int, primes=DEFAULT_PRIMES) -> dict[int, int]:
    """i -> dim of the q^i part, from the character oracle."""
    coeffs = pconf_character_oracle(m, n, N, primes)
    return {i: (-1) ** (m - i) * c for i, c in enumerate(coeffs) if c}


# -- loop spaces and the stable window --------------------------------------------

def loop_series(n: int, k: int, J: int) -> list[int]:
    """Coefficients of x^0..x^J in prod_k (1 - (-1)^{D_k} x^{D_k})^(-e_k), D_k = k(n-2)-1."""
    if n < 3:
        raise ValueError("loop series needs n >= 3")
    N = middle_betti(n, k)
    out = [0] * (J + 1)
    out[0] = 1
    kk = 1
    while kk * (n - 2) - 1 <= J:
        D = kk * (n - 2) - 1
        e = e_seq(N, n, kk)[-1]
        sgn = (-1) ** D
        fac = [0] * (J + 1)
        for j, c in enumerate(inv_power_series(e, J // D)):
            fac[j * D] = c * sgn ** j
        out = [sum(out[a] * fac[t - a] for a in range(t + 1)) for t in range(J + 1)]
        kk += 1
    return out


def loop_betti(j: int, n: int, k: int) -> int:
    return loop_series(n, k, j)[j]


def row_consistent(n: int, k: int, d: int) -> dict:
    """Compare anti-diagonal sums of the page with loop-space Betti numbers."""
    page = e1_page(n, k, d)
    J = d * (n - 3)
    ls = loop_series(n, k, J) if n >= 3 else [1]
    rows = {j: {"loop": ls[j], "page": page.antidiagonal(j)} for j in range(J + 1)}
    return {"range": J, "rows": rows, "ok": all(r["loop"] == r["page"] for r in rows.values())}


@dataclass(frozen=True)
class StableWindow:
    d: int
    k: int
    n: int
    stable_threshold: Fraction
    minor_threshold: Fraction
    n_range_ok: bool
    hypothesis_ok: bool
    gaps: tuple

    def to_json(self) -> dict:
        return {"d": self.d, "k": self.k, "n": self.n,
                "stable_threshold": str(self.stable_threshold),
                "minor_threshold": str(self.minor_threshold),
                "n_range_ok": self.n_range_ok, "hypothesis_ok": self.hypothesis_ok,
                "gaps": [list(g) for g in self.gaps]}


def stable_window(d: int, k: int, n: int) -> StableWindow:
    if k < 2:
        raise ValueError("k >= 2 required")
    fl = d // (k - 1)
    slope = Fraction(n, 2 ** k) - k + 1
    stable = -4 * (fl * slope - 1)
    minor = 2 * d * n + 4 - 4 * fl * slope
    gaps = tuple((1 - m * (n - 2), -m * (n - 3)) for m in range(1, d + 1))
    return StableWindow(d, k, n, stable, Fraction(minor), fl * slope >= 1,
                        n > 2 ** k * (k - 1), gaps)


def feasible_differentials(n: int, d: int) -> list[tuple[int, int, int]]:
    """(m, s, r) such that the page-r differential (m, s) -> (m + r, s - r + 1) may be nonzero.

    Both ends must lie in the support, r >= 2 is even (odd pages vanish by
    weight) and m + r <= d. Overlap of the two support columns forces
    m >= r(n-3) + 2, which is asserted rather than assumed.
    """
    if n < 4:
        raise ValueError("n >= 4 required")
    out = []
    for r in range(2, d + 1, 2):
        for m in range(1, d - r + 1):
            for s in range(-m * (n - 1) + 1, -m * (n - 2) + 1):
                if in_support(m + r, s - r + 1, n):
                    assert m >= r * (n - 3) + 2
                    out.append((m, s, r))
    return out
