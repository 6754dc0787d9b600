"""Univariate polynomials over F_p, truncated Laurent tails, rational approximation.

Coefficients are stored lowest degree first. A Laurent tail ``b`` of length L
stands for sum_{r=1}^{L} b[r-1] T^{-r}.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import ff


@dataclass(frozen=True)
class FqPoly:
    p: int
    coeffs: tuple = ()

    def __post_init__(self):
        c = [int(v) % self.p for v in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def monomial(cls, p: int, deg: int, c: int = 1) -> "FqPoly":
        return cls(p, (0,) * deg + (c,))

    @classmethod
    def const(cls, p: int, c: int) -> "FqPoly":
        return cls(p, (c,))

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __add__(self, o: "FqPoly") -> "FqPoly":
        n = max(len(self.coeffs), len(o.coeffs))
        return FqPoly(self.p, tuple(self.coeff(i) + o.coeff(i) for i in range(n)))

    def __neg__(self) -> "FqPoly":
        return FqPoly(self.p, tuple(-c for c in self.coeffs))

    def __sub__(self, o: "FqPoly") -> "FqPoly":
        return self + (-o)

    def __mul__(self, o) -> "FqPoly":
        if isinstance(o, int):
            return FqPoly(self.p, tuple(o * c for c in self.coeffs))
        if not self.coeffs or not o.coeffs:
            return FqPoly(self.p, ())
        out = [0] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return FqPoly(self.p, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "FqPoly":
        out = FqPoly(self.p, (1,))
        for _ in range(e):
            out = out * self
        return out

    def divmod(self, o: "FqPoly") -> tuple["FqPoly", "FqPoly"]:
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by 0")
        p = self.p
        rem = list(self.coeffs)
        inv = pow(o.lead, -1, p)
        dq = len(rem) - len(o.coeffs)
        if dq < 0:
            return FqPoly(p, ()), self
        quo = [0] * (dq + 1)
        for i in range(dq, -1, -1):
            c = rem[i + o.degree] * inv % p
            quo[i] = c
            if c:
                for j, b in enumerate(o.coeffs):
                    rem[i + j] = (rem[i + j] - c * b) % p
        return FqPoly(p, tuple(quo)), FqPoly(p, tuple(rem[:o.degree]))

    def __mod__(self, o: "FqPoly") -> "FqPoly":
        return self.divmod(o)[1]

    def __floordiv__(self, o: "FqPoly") -> "FqPoly":
        return self.divmod(o)[0]

    def monic(self) -> "FqPoly":
        if self.is_zero():
            return self
        return self * pow(self.lead, -1, self.p)

    def deriv(self) -> "FqPoly":
        return FqPoly(self.p, tuple(i * c for i, c in enumerate(self.coeffs))[1:])

    def __call__(self, x: int) -> int:
        v = 0
        for c in reversed(self.coeffs):
            v = (v * x + c) % self.p
        return v

    def __str__(self) -> str:
        return to_text(self)


def poly_gcd(a: FqPoly, b: FqPoly) -> FqPoly:
    """Monic gcd; gcd(0, 0) is undefined and raises."""
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0)")
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def xgcd(a: FqPoly, b: FqPoly) -> tuple[FqPoly, FqPoly, FqPoly]:
    """(g, s, t) with s a + t b = g, g monic."""
    p = a.p
    r0, r1 = a, b
    s0, s1 = FqPoly(p, (1,)), FqPoly(p, ())
    t0, t1 = FqPoly(p, ()), FqPoly(p, (1,))
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    c = pow(r0.lead, -1, p)
    return r0 * c, s0 * c, t0 * c


def is_squarefree(f: FqPoly) -> bool:
    """gcd(f, f') = 1 test; f' = 0 only for p-th powers, which are not squarefree."""
    if f.is_zero():
        raise ValueError("the zero polynomial has no squarefree status")
    if f.degree == 0:
        return True
    df = f.deriv()
    if df.is_zero():
        return False
    return poly_gcd(f, df).degree == 0


def monic_polys(p: int, deg: int):
    """All monic polynomials of the given degree, in lexicographic order."""
    import itertools

    for low in itertools.product(range(p), repeat=deg):
        yield FqPoly(p, tuple(reversed(low)) + (1,))


def polys_below(p: int, deg: int):
    """All polynomials of degree < deg (including 0)."""
    import itertools

    for c in itertools.product(range(p), repeat=deg):
        yield FqPoly(p, tuple(reversed(c)))


# -- text form ---------------------------------------------------------------

def to_text(f: FqPoly) -> str:
    """Canonical text form, e.g. ``1+2*T+T^3``; the zero polynomial is ``0``."""
    if f.is_zero():
        return "0"
    parts = []
    for i, c in enumerate(f.coeffs):
        if not c:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            mono = "T" if i == 1 else f"T^{i}"
            parts.append(mono if c == 1 else f"{c}*{mono}")
    return "+".join(parts)


_TERM = re.compile(r"^(?:(\d+)\*?)?(T(?:\^(\d+))?)?$")


def from_text(p: int, s: str) -> FqPoly:
    s = s.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    coeffs: dict[int, int] = {}
    for term in re.split(r"\+", s.replace("-", "+-")):
        if not term:
            continue
        sign = 1
        if term.startswith("-"):
            sign, term = -1, term[1:]
        m = _TERM.match(term)
        if not m or (m.group(1) is None and m.group(2) is None):
            raise ValueError(f"bad polynomial term {term!r}")
        c = int(m.group(1)) if m.group(1) is not None else 1
        e = 0 if m.group(2) is None else (int(m.group(3)) if m.group(3) else 1)
        coeffs[e] = coeffs.get(e, 0) + sign * c
    top = max(coeffs)
    return FqPoly(p, tuple(coeffs.get(i, 0) for i in range(top + 1)))


# -- Laurent tails -------------------------------------------------------------

@dataclass(frozen=True)
class LaurentTail:
    """b_1 T^-1 + ... + b_L T^-L, an element of T^-1 F_p[[T^-1]] mod T^-(L+1)."""

    p: int
    b: tuple

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(int(v) % self.p for v in self.b))

    @property
    def length(self) -> int:
        return len(self.b)


def laurent_expand(h1: FqPoly, h2: FqPoly, length: int) -> tuple[FqPoly, tuple]:
    """Polynomial part and the first ``length`` negative coefficients of h1/h2."""
    if h2.is_zero():
        raise ZeroDivisionError("h2 = 0")
    p = h1.p
    q, r = h1.divmod(h2)
    # long division of r by h2 in powers of T^-1
    inv = pow(h2.lead, -1, p)
    m = h2.degree
    rem = list(r.coeffs) + [0] * (m - len(r.coeffs))
    tail = []
    for _ in range(length):
        # multiply remainder by T; the new top coefficient yields the next digit
        rem = [0] + rem
        top = rem[m] if m < len(rem) else 0
        c = top * inv % p
        tail.append(c)
        for j, hc in enumerate(h2.coeffs):
            rem[j] = (rem[j] - c * hc) % p
        rem = rem[:m]
    return q, tuple(tail)


def tail_times_poly(b, h: FqPoly, p: int) -> tuple[FqPoly, list]:
    """Split h * sum b_r T^-r into its polynomial part and negative coefficients.

    Returned list has entry j for T^-(j+1); only the exactly known terms
    (those not touched by the truncation) are meaningful to the caller.
    """
    L = len(b)
    pos: dict[int, int] = {}
    for e, hc in enumerate(h.coeffs):
        for r in range(1, L + 1):
            pos[e - r] = (pos.get(e - r, 0) + hc * b[r - 1]) % p
    top = max([k for k in pos if k >= 0], default=-1)
    poly = FqPoly(p, tuple(pos.get(i, 0) for i in range(top + 1)))
    neg = [pos.get(-j, 0) for j in range(1, L + 1)]
    return poly, neg


@dataclass(frozen=True)
class RationalApprox:
    """Coprime h1/h2 with h2 monic of degree m_prime approximating a tail."""

    m_prime: int
    h1: FqPoly
    h2: FqPoly


def hankel_matrix(b, m: int) -> list[list[int]]:
    """(L-m) x (m+1) matrix with entry (i, j) = b_{i+j+1} (1-based b)."""
    L = len(b)
    return [[b[i + j] for j in range(m + 1)] for i in range(L - m)]


def rational_reconstruct(b, m: int, p: int) -> RationalApprox | None:
    """Minimal h1/h2 with deg h2 <= m approximating the tail b, via the Hankel kernel.

    Returns None when no such approximation exists (b not in A_m).
    """
    from .arcs import arc_level

    b = tuple(int(v) % p for v in b)
    if not 0 <= 2 * m <= len(b):
        raise ValueError(f"m={m} outside [0, L/2] for L={len(b)}")
    lev = arc_level(b, p)
    if lev > m:
        return None
    if lev == 0:
        zero = FqPoly(p, ())
        return RationalApprox(0, zero, FqPoly(p, (1,)))
    ker = ff.nullspace_mod_p(hankel_matrix(b, lev), lev + 1, p)
    # any kernel vector reduces to the same coprime pair; take the one of top degree
    best = max(ker, key=lambda v: max(i for i, x in enumerate(v) if x))
    h2 = FqPoly(p, tuple(best))
    h1, _ = tail_times_poly(b, h2, p)
    g = poly_gcd(h1, h2) if not h1.is_zero() else h2.monic()
    h1, h2 = h1 // g, h2 // g
    c = pow(h2.lead, -1, p)
    h1, h2 = h1 * c, h2 * c
    return RationalApprox(h2.degree, h1, h2)


def rational_reconstruct_euclid(b, m: int, p: int) -> RationalApprox | None:
    """Independent route: extended Euclid on (T^L, sum b_r T^(L-r)), Pade style."""
    L = len(b)
    if not 0 <= 2 * m <= L:
        raise ValueError(f"m={m} outside [0, L/2] for L={L}")
    big = FqPoly.monomial(p, L)
    B = FqPoly(p, tuple(b[L - 1 - i] for i in range(L)))
    if B.is_zero():
        return RationalApprox(0, FqPoly(p, ()), FqPoly(p, (1,)))
    r0, r1 = big, B
    s0, s1 = FqPoly(p, (1,)), FqPoly(p, ())
    t0, t1 = FqPoly(p, ()), FqPoly(p, (1,))
    # s T^L + t B = r; stop at the first remainder of degree < m
    while r1.degree >= m:
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if t1.degree > m:
        return None
    h2, h1 = t1, -s1
    c = pow(h2.lead, -1, p)
    h1, h2 = h1 * c, h2 * c
    g = poly_gcd(h1, h2) if not h1.is_zero() else h2
    h1, h2 = h1 // g, h2 // g
    return RationalApprox(h2.degree, h1, h2)
