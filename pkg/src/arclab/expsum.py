"""Exponential sums over spaces of polynomial tuples.

An instance fixes p, a degree-k polynomial f in n variables and a point P on
the projective hypersurface f0 = 0 (f0 = top-degree part). For a in F_p^{dn}
the tuple g_j = P_j T^d + sum_{i<d} a[j*d+i] T^i gives f(g) of degree <= kd-1,
whose coefficients c_1..c_kd (c_r multiplies T^(r-1)) define the coefficient
map. Everything here is exact: sums are compared as value distributions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import arcs, ff, kernels
from .ff import CountVector
from .poly import FqPoly, is_squarefree, monic_polys, poly_gcd

Monomials = tuple  # tuple of (exponent tuple, coefficient)


class InstanceError(ValueError):
    """The instance violates a standing hypothesis."""


# -- multivariate polynomials as monomial lists ------------------------------------

def parse_monomials(text: str, n: int | None = None) -> Monomials:
    """``e1,..,en:c;...`` -> sorted monomial tuple with coefficients merged."""
    acc: dict[tuple, int] = {}
    for term in text.replace(" ", "").split(";"):
        if not term:
            continue
        if ":" in term:
            es, cs = term.split(":")
            c = int(cs)
        else:
            es, c = term, 1
        e = tuple(int(v) for v in es.split(","))
        if n is not None and len(e) != n:
            raise InstanceError(f"monomial {term!r} does not have {n} exponents")
        if any(v < 0 for v in e):
            raise InstanceError(f"negative exponent in {term!r}")
        acc[e] = acc.get(e, 0) + c
    return tuple(sorted(acc.items()))


def format_monomials(mons: Monomials) -> str:
    return ";".join(",".join(map(str, e)) + f":{c}" for e, c in mons)


def normalise(mons, p: int) -> Monomials:
    acc: dict[tuple, int] = {}
    for e, c in mons:
        acc[tuple(e)] = (acc.get(tuple(e), 0) + c) % p
    return tuple(sorted((e, c) for e, c in acc.items() if c))


def total_degree(mons: Monomials) -> int:
    return max((sum(e) for e, _ in mons), default=-1)


def homogeneous_part(mons: Monomials, k: int) -> Monomials:
    return tuple((e, c) for e, c in mons if sum(e) == k)


def partial(mons: Monomials, i: int, p: int) -> Monomials:
    out = []
    for e, c in mons:
        if e[i]:
            e2 = list(e)
            e2[i] -= 1
            out.append((tuple(e2), c * e[i]))
    return normalise(out, p)


def eval_at(mons: Monomials, x, p: int) -> int:
    v = 0
    for e, c in mons:
        t = c
        for xi, ei in zip(x, e):
            t = t * pow(int(xi), ei, p)
        v += t
    return v % p


def value_table(mons: Monomials, n: int, p: int) -> np.ndarray:
    """Values at every point of F_p^n (index sum x_i p^i)."""
    mons = normalise(mons, p)
    if not mons:
        return np.zeros(p ** n, dtype=np.int64)
    exps = np.array([e for e, _ in mons], dtype=np.int64)
    coeffs = np.array([c for _, c in mons], dtype=np.int64)
    return kernels.poly_value_table(exps, coeffs, n, p)


def _fp2_eval(F: ff.Fp2, mons: Monomials, pts) -> tuple:
    """Evaluate at an array of F_p^2 points (tuple of per-coordinate (re, im))."""
    like = pts[0][0]
    acc = F.scalar(0, like)
    cache: dict[tuple[int, int], tuple] = {}
    for e, c in mons:
        term = F.scalar(c, like)
        for i, ei in enumerate(e):
            if ei:
                if (i, ei) not in cache:
                    cache[(i, ei)] = F.power(pts[i], ei)
                term = F.mul(term, cache[(i, ei)])
        acc = F.add(acc, term)
    return acc


def _fp2_points(p: int, n: int):
    F = ff.Fp2(p)
    q = p * p
    idx = np.arange(q ** n, dtype=np.int64)
    pts = []
    for i in range(n):
        v = (idx // q ** i) % q
        pts.append((v % p, v // p))
    return F, pts


def common_zero_exists(systems: list[Monomials], n: int, p: int, exclude_origin: bool,
                       extension: int = 1, max_enum: int | None = None) -> bool:
    """Is there a common zero of all systems over F_p (extension=1) or F_p^2?"""
    if extension == 1:
        arcs.guard(p ** n, max_enum, "point scan")
        mask = np.ones(p ** n, dtype=bool)
        for s in systems:
            mask &= value_table(s, n, p) == 0
        if exclude_origin:
            mask[0] = False
        return bool(mask.any())
    arcs.guard(p ** (2 * n), max_enum, "point scan over F_p^2")
    F, pts = _fp2_points(p, n)
    mask = np.ones(p ** (2 * n), dtype=bool)
    for s in systems:
        re, im = _fp2_eval(F, s, pts)
        mask &= (re == 0) & (im == 0)
    if exclude_origin:
        mask[0] = False
    return bool(mask.any())


# -- instances ---------------------------------------------------------------

@dataclass(frozen=True)
class MorInstance:
    p: int
    k: int
    n: int
    d: int
    f: Monomials
    P: tuple
    max_enum: int | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "P", tuple(int(v) % self.p for v in self.P))
        object.__setattr__(self, "f", normalise(self.f, self.p) if ff.is_prime(self.p) else self.f)
        self.validate()

    @property
    def kd(self) -> int:
        return self.k * self.d

    @property
    def f0(self) -> Monomials:
        return homogeneous_part(self.f, self.k)

    def validate(self) -> None:
        p, k, n = self.p, self.k, self.n
        if not ff.is_prime(p):
            raise InstanceError(f"p={p} is not prime")
        if k < 1 or n < 1 or self.d < 1:
            raise InstanceError("k, n, d must be positive")
        if p <= k:
            raise InstanceError(f"need p > k (p={p}, k={k})")
        if any(len(e) != n for e, _ in self.f):
            raise InstanceError("monomial arity differs from n")
        if total_degree(self.f) != k:
            raise InstanceError(f"f has degree {total_degree(self.f)}, expected {k}")
        if len(self.P) != n:
            raise InstanceError("P has the wrong length")
        if not any(self.P):
            raise InstanceError("P must be nonzero")
        f0 = self.f0
        if eval_at(f0, self.P, p):
            raise InstanceError("P is not on the hypersurface f0 = 0")
        grads0 = [partial(f0, i, p) for i in range(n)]
        if not any(eval_at(g, self.P, p) for g in grads0):
            raise InstanceError("f0 is singular at P")
        for ext in (1, 2):
            if p == 2 and ext == 2:
                continue
            if common_zero_exists(grads0, n, p, True, ext, self.max_enum):
                raise InstanceError(f"f0 = 0 is singular over F_{p}^{ext}")
            grads = [partial(self.f, i, p) for i in range(n)]
            if common_zero_exists([self.f] + grads, n, p, False, ext, self.max_enum):
                raise InstanceError(f"f = 0 is singular over F_{p}^{ext}")

    def with_prime(self, p: int, P) -> "MorInstance":
        return MorInstance(p, self.k, self.n, self.d, self.f, tuple(P), self.max_enum)

    def to_params(self) -> dict:
        return {"p": self.p, "k": self.k, "n": self.n, "d": self.d,
                "f": format_monomials(self.f), "P": list(self.P)}


def parse_instance(text: str, max_enum: int | None = None) -> MorInstance:
    kv: dict[str, str] = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InstanceError(f"malformed line {line!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        kv[key] = val
    missing = {"p", "k", "n", "d", "P", "f"} - kv.keys()
    if missing:
        raise InstanceError(f"missing keys: {sorted(missing)}")
    try:
        p, k, n, d = (int(kv[x]) for x in "pknd")
        P = tuple(int(v) for v in kv["P"].split(","))
        f = parse_monomials(kv["f"], n)
    except ValueError as exc:
        if isinstance(exc, InstanceError):
            raise
        raise InstanceError(str(exc)) from exc
    return MorInstance(p, k, n, d, f, P, max_enum)


def load_instance(path, max_enum: int | None = None) -> MorInstance:
    return parse_instance(Path(path).read_text(), max_enum)


def instance_text(inst: MorInstance) -> str:
    return (f"p={inst.p}\nk={inst.k}\nn={inst.n}\nd={inst.d}\n"
            f"P={','.join(map(str, inst.P))}\nf={format_monomials(inst.f)}\n")


# -- vectorised polynomial tuples ----------------------------------------------

def _pconv(x: np.ndarray, y: np.ndarray, p: int) -> np.ndarray:
    """Row-wise product of coefficient arrays (M, a) * (M, b) -> (M, a+b-1)."""
    M, a = x.shape
    b = y.shape[1]
    out = np.zeros((M, a + b - 1), dtype=np.int64)
    for i in range(a):
        out[:, i:i + b] += x[:, i:i + 1] * y
        if i % 8 == 7:
            out %= p
    return out % p


def eval_on_tuples(mons: Monomials, G: np.ndarray, p: int) -> np.ndarray:
    """f(g) for polynomial tuples G of shape (M, n, L) -> (M, k(L-1)+1)."""
    M, n, L = G.shape
    k = max(total_degree(mons), 0)
    width = k * (L - 1) + 1
    powers: dict[tuple[int, int], np.ndarray] = {}

    def power(j: int, e: int) -> np.ndarray:
        if e == 0:
            one = np.zeros((M, 1), dtype=np.int64)
            one[:, 0] = 1
            return one
        if (j, e) not in powers:
            powers[(j, e)] = _pconv(power(j, e - 1), G[:, j, :], p)
        return powers[(j, e)]

    out = np.zeros((M, width), dtype=np.int64)
    for e, c in mons:
        term = np.full((M, 1), c % p, dtype=np.int64)
        for j, ej in enumerate(e):
            if ej:
                term = _pconv(term, power(j, ej), p)
        out[:, :term.shape[1]] = (out[:, :term.shape[1]] + term) % p
    return out


def all_points(p: int, dim: int, max_enum: int | None = None) -> np.ndarray:
    arcs.guard(p ** dim, max_enum)
    idx = np.arange(p ** dim, dtype=np.int64)
    return np.stack([(idx // p ** i) % p for i in range(dim)], axis=1).reshape(p ** dim, dim)


def tuples_from_a(inst: MorInstance, A: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64).reshape(-1, inst.n * inst.d)
    G = np.zeros((len(A), inst.n, inst.d + 1), dtype=np.int64)
    G[:, :, :inst.d] = A.reshape(len(A), inst.n, inst.d)
    G[:, :, inst.d] = np.asarray(inst.P, dtype=np.int64)
    return G % inst.p


def coeff_map_batch(inst: MorInstance, A: np.ndarray) -> np.ndarray:
    full = eval_on_tuples(inst.f, tuples_from_a(inst, A), inst.p)
    if full.shape[1] > inst.kd and full[:, inst.kd:].any():
        raise ArithmeticError("f(g) has degree >= kd; P is not on f0 = 0")
    return full[:, :inst.kd]


def coeff_map(inst: MorInstance, a) -> tuple:
    """(c_1, .., c_kd) for one a in F_p^{dn} (ordering a[j*d+i])."""
    a = np.asarray(a, dtype=np.int64).reshape(1, -1)
    if a.shape[1] != inst.n * inst.d:
        raise ValueError(f"a must have {inst.n * inst.d} entries")
    return tuple(int(v) for v in coeff_map_batch(inst, a)[0])


def top_coefficient_batch(inst: MorInstance, A: np.ndarray) -> np.ndarray:
    """Coefficient of T^kd in f(g); identically 0 on valid instances."""
    full = eval_on_tuples(inst.f, tuples_from_a(inst, A), inst.p)
    return full[:, inst.kd] if full.shape[1] > inst.kd else np.zeros(len(full), dtype=np.int64)


@dataclass(frozen=True)
class Histogram:
    """counts of the coefficient map over F_p^{dn}; sparse over F_p^{kd}."""

    p: int
    kd: int
    cells: np.ndarray  # (K, kd) distinct coefficient vectors
    weights: np.ndarray  # (K,)

    @property
    def total(self) -> int:
        return int(self.weights.sum())

    def count(self, c) -> int:
        c = np.asarray(c, dtype=np.int64) % self.p
        hit = np.all(self.cells == c, axis=1)
        return int(self.weights[hit].sum())

    def dense(self) -> np.ndarray:
        arcs.guard(self.p ** self.kd, None, "dense histogram")
        out = np.zeros(self.p ** self.kd, dtype=np.int64)
        np.add.at(out, encode(self.cells, self.p), self.weights)
        return out


def encode(rows: np.ndarray, p: int) -> np.ndarray:
    rows = np.asarray(rows, dtype=np.int64)
    w = p ** np.arange(rows.shape[1], dtype=np.int64)
    return rows @ w


def histogram(inst: MorInstance, chunk: int = 1 << 16) -> Histogram:
    dim = inst.n * inst.d
    total = inst.p ** dim
    arcs.guard(total, inst.max_enum, "coefficient map enumeration")
    keys: dict[int, int] = {}
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        A = np.stack([(idx // inst.p ** i) % inst.p for i in range(dim)], axis=1)
        C = coeff_map_batch(inst, A)
        u, cnt = np.unique(encode(C, inst.p), return_counts=True)
        for key, c in zip(u.tolist(), cnt.tolist()):
            keys[key] = keys.get(key, 0) + c
    ks = np.array(sorted(keys), dtype=np.int64)
    cells = np.stack([(ks // inst.p ** r) % inst.p for r in range(inst.kd)], axis=1)
    return Histogram(inst.p, inst.kd, cells, np.array([keys[k] for k in ks.tolist()], dtype=np.int64))


def count_mor(inst: MorInstance, hist: Histogram | None = None) -> int:
    """#{a : f(g(a)) = 0}."""
    hist = hist or histogram(inst)
    return hist.count([0] * inst.kd)


def cv_at(hist: Histogram, b) -> CountVector:
    """Distribution of e(a; b) = sum_r b_r c_r(a) over a."""
    b = np.asarray(b, dtype=np.int64) % hist.p
    vals = hist.cells @ b % hist.p
    return CountVector.from_values(hist.p, vals, hist.weights)


def cvs_at(hist: Histogram, B: np.ndarray, chunk: int = 2048) -> np.ndarray:
    """Count vectors for every row of B, as an (nb, p) int64 array."""
    B = np.asarray(B, dtype=np.int64) % hist.p
    p = hist.p
    out = np.zeros((len(B), p), dtype=np.int64)
    for s in range(0, len(B), chunk):
        vals = (B[s:s + chunk] @ hist.cells.T) % p
        for t in range(p):
            out[s:s + chunk, t] = (vals == t) @ hist.weights
    return out


def sweep(hist: Histogram) -> np.ndarray:
    """S(b) = sum_a psi(e(a;b)) for all b; array indexed by (b_1..b_kd)."""
    p = hist.p
    w = np.exp(2j * np.pi * np.outer(np.arange(p), np.arange(p)) / p)
    arr = hist.dense().reshape((p,) * hist.kd, order="F").astype(np.complex128)
    for ax in range(hist.kd):
        arr = np.moveaxis(np.tensordot(w, arr, axes=([1], [ax])), 0, ax)
    return arr


# -- residue sums ----------------------------------------------------------------

def _mod_monic(X: np.ndarray, h2: FqPoly, p: int) -> np.ndarray:
    """Row-wise remainder mod a monic h2, shape (M, deg h2)."""
    m = h2.degree
    X = X.copy() % p
    hc = np.array(h2.coeffs, dtype=np.int64)
    for top in range(X.shape[1] - 1, m - 1, -1):
        c = X[:, top].copy()
        X[:, top - m:top + 1] = (X[:, top - m:top + 1] - c[:, None] * hc[None, :]) % p
    out = np.zeros((len(X), m), dtype=np.int64)
    w = min(m, X.shape[1])
    out[:, :w] = X[:, :w]
    return out


def _residue_basis(inst: MorInstance, h2: FqPoly) -> np.ndarray:
    """R[x, i] = coefficient of T^(m-1) in T^i f(x) mod h2, over x in (F_p^m)^n."""
    p, n, m = inst.p, inst.n, h2.degree
    X = all_points(p, n * m, inst.max_enum).reshape(-1, n, m)
    F = eval_on_tuples(inst.f, X, p)
    R = np.zeros((len(X), m), dtype=np.int64)
    shifted = F
    for i in range(m):
        R[:, i] = _mod_monic(shifted, h2, p)[:, m - 1]
        shifted = np.concatenate([np.zeros((len(X), 1), dtype=np.int64), shifted], axis=1)
    return R


def residue_sum(inst: MorInstance, h1: FqPoly, h2: FqPoly) -> CountVector:
    """Distribution over x in (F_p[T]/h2)^n of the T^-1 coefficient of h1 f(x)/h2."""
    p = inst.p
    if h2.is_zero() or h1.degree >= h2.degree:
        raise ValueError("need deg h1 < deg h2")
    if h2.degree > 0 and (h1.is_zero() or poly_gcd(h1, h2).degree > 0):
        raise ValueError("h1 and h2 must be coprime")
    h2m = h2.monic()
    h1 = h1 * pow(h2.lead, -1, p)
    m = h2m.degree
    if m == 0:
        return CountVector.delta(p, 0)
    R = _residue_basis(inst, h2m)
    hv = np.array([h1.coeff(i) for i in range(m)], dtype=np.int64)
    return CountVector.from_values(p, R @ hv % p)


def coprime_numerators(h2: FqPoly):
    from .poly import polys_below

    m = h2.degree
    if m == 0:
        yield FqPoly(h2.p, ())
        return
    for h1 in polys_below(h2.p, m):
        if not h1.is_zero() and poly_gcd(h1, h2).degree == 0:
            yield h1


def aggregate_residue(inst: MorInstance, h2: FqPoly) -> CountVector:
    """Sum of residue_sum(h1, h2) over h1 coprime to h2 with deg h1 < deg h2."""
    p = inst.p
    h2 = h2.monic()
    m = h2.degree
    if m == 0:
        return CountVector.delta(p, 0)
    R = _residue_basis(inst, h2)
    H = np.array([[h1.coeff(i) for i in range(m)] for h1 in coprime_numerators(h2)], dtype=np.int64)
    vals = (R @ H.T) % p
    return CountVector(p, tuple(int((vals == t).sum()) for t in range(p)))


# -- checks ------------------------------------------------------------------------

@dataclass
class CheckReport:
    check: str
    passed: bool
    details: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"check": self.check, "passed": self.passed, "details": self.details,
                "violations": self.violations}


def _cv_list(row) -> list:
    return [int(v) for v in row]


def check_orthogonality(inst: MorInstance, hist: Histogram | None = None,
                        classification: arcs.Classification | None = None) -> CheckReport:
    """sum over all b of the exponential sum equals p^kd * #Mor."""
    hist = hist or histogram(inst)
    p = inst.p
    cl = classification or arcs.classify_all(p, inst.kd, max_enum=inst.max_enum)
    agg = cvs_at(hist, cl.tails).sum(axis=0)
    count = count_mor(inst, hist)
    lhs = CountVector(p, tuple(int(v) for v in agg))
    exact = (len(set(lhs.counts[1:])) <= 1) and (lhs.counts[0] - lhs.counts[1 % p] == p ** inst.kd * count
                                                 if p > 1 else True)
    S = sweep(hist)
    total = complex(S.sum())
    err = abs(total - p ** inst.kd * count)
    rep = CheckReport("orthogonality", bool(exact and err <= 1e-6 * max(1, p ** inst.kd * hist.total)))
    rep.details = {"count_mor": count, "sum_real": total.real, "sum_imag": total.imag,
                   "expected": p ** inst.kd * count, "abs_error": err, "aggregate": list(lhs.counts)}
    if not rep.passed:
        rep.violations.append({"aggregate": list(lhs.counts)})
    return rep


def check_infinity(inst: MorInstance, m: int, hist: Histogram | None = None,
                   classification: arcs.Classification | None = None) -> CheckReport:
    """Sums vanish on (A_m - A_{m-1}) - U_m for m <= d."""
    if not 0 <= m <= inst.d:
        raise ValueError(f"m must lie in [0, d={inst.d}]")
    hist = hist or histogram(inst)
    cl = classification or arcs.classify_all(inst.p, inst.kd, max_enum=inst.max_enum)
    sel = (cl.level == m) & ~cl.in_um
    B = cl.tails[sel]
    cvs = cvs_at(hist, B)
    bad = np.flatnonzero(cvs.min(axis=1) != cvs.max(axis=1))
    rep = CheckReport("infinity", len(bad) == 0, {"m": m, "n_points": int(len(B))})
    rep.violations = [{"b": _cv_list(B[i]), "counts": _cv_list(cvs[i])} for i in bad[:20]]
    return rep


def check_residue(inst: MorInstance, m: int, hist: Histogram | None = None,
                  classification: arcs.Classification | None = None) -> CheckReport:
    """For every b in U_m (m <= d): distribution of e(.;b) = p^{n(d-m)} * residue_sum."""
    if not 0 <= m <= inst.d:
        raise ValueError(f"m must lie in [0, d={inst.d}]")
    hist = hist or histogram(inst)
    p = inst.p
    cl = classification or arcs.classify_all(p, inst.kd, max_enum=inst.max_enum)
    B = cl.tails[(cl.level == m) & cl.in_um]
    cvs = cvs_at(hist, B)
    scale = p ** (inst.n * (inst.d - m))
    bases: dict[tuple, np.ndarray] = {}
    rep = CheckReport("residue", True, {"m": m, "n_points": int(len(B))})
    for b, cv in zip(B, cvs):
        chart = arcs.in_Um(tuple(int(v) for v in b), p)
        if chart is None:
            rep.passed = False
            rep.violations.append({"b": _cv_list(b), "reason": "no chart"})
            continue
        key = chart.h2.coeffs
        if key not in bases:
            bases[key] = _residue_basis(inst, chart.h2) if m else np.zeros((1, 0), dtype=np.int64)
        hv = np.array([chart.h1.coeff(i) for i in range(m)], dtype=np.int64)
        vals = bases[key] @ hv % p if m else np.zeros(1, dtype=np.int64)
        rhs = np.bincount(vals, minlength=p) * scale
        if not np.array_equal(rhs, cv):
            rep.passed = False
            if len(rep.violations) < 20:
                rep.violations.append({"b": _cv_list(b), "lhs": _cv_list(cv), "rhs": _cv_list(rhs)})
    return rep


def residue_reduction(inst: MorInstance, b, hist: Histogram | None = None) -> bool:
    """Single-point form of the residue reduction; b must lie in U_m with m <= d."""
    p = inst.p
    chart = arcs.in_Um(b, p)
    if chart is None:
        raise ValueError("b is not in any U_m")
    if chart.m > inst.d:
        raise ValueError(f"b lies in U_{chart.m} with m > d")
    hist = hist or histogram(inst)
    lhs = cv_at(hist, b)
    rhs = residue_sum(inst, chart.h1, chart.h2).scale(p ** (inst.n * (inst.d - chart.m)))
    return lhs == rhs


def factorisation_holds(inst: MorInstance, l1: FqPoly, l2: FqPoly) -> bool:
    """aggregate(l1 l2) == aggregate(l1) * aggregate(l2) for coprime monic l1, l2."""
    if l1.lead != 1 or l2.lead != 1:
        raise ValueError("l1 and l2 must be monic")
    if poly_gcd(l1, l2).degree > 0:
        raise ValueError("l1 and l2 must be coprime")
    return aggregate_residue(inst, l1 * l2) == ff.convolve(aggregate_residue(inst, l1),
                                                            aggregate_residue(inst, l2))


def check_power(inst: MorInstance, m: int) -> CheckReport:
    """Aggregate residue sums vanish for every non-squarefree monic h2 of degree m."""
    p = inst.p
    rep = CheckReport("power", True, {"m": m, "n_moduli": 0})
    for h2 in monic_polys(p, m):
        if is_squarefree(h2):
            continue
        rep.details["n_moduli"] += 1
        cv = aggregate_residue(inst, h2)
        if not ff.is_uniform(cv):
            rep.passed = False
            rep.violations.append({"h2": str(h2), "counts": list(cv.counts)})
    return rep


def check_factorisation(inst: MorInstance, m: int) -> CheckReport:
    """Aggregate sums are multiplicative over coprime monic l1, l2 with deg l1 + deg l2 = m."""
    p = inst.p
    rep = CheckReport("factorisation", True, {"m": m, "n_pairs": 0})
    cache: dict[tuple, CountVector] = {}

    def agg(h: FqPoly) -> CountVector:
        if h.coeffs not in cache:
            cache[h.coeffs] = aggregate_residue(inst, h)
        return cache[h.coeffs]

    for m1 in range(1, m // 2 + 1):
        m2 = m - m1
        for l1 in monic_polys(p, m1):
            for l2 in monic_polys(p, m2):
                if m1 == m2 and l1.coeffs > l2.coeffs:
                    continue
                if poly_gcd(l1, l2).degree > 0:
                    continue
                rep.details["n_pairs"] += 1
                lhs, rhs = agg(l1 * l2), ff.convolve(agg(l1), agg(l2))
                if lhs != rhs:
                    rep.passed = False
                    if len(rep.violations) < 20:
                        rep.violations.append({"l1": str(l1), "l2": str(l2),
                                               "lhs": list(lhs.counts), "rhs": list(rhs.counts)})
    return rep


def affine_point_count(inst: MorInstance) -> int:
    arcs.guard(inst.p ** inst.n, inst.max_enum, "point count")
    return int((value_table(inst.f, inst.n, inst.p) == 0).sum())


def check_mainterm(inst: MorInstance) -> CheckReport:
    """For h2 = T - x the aggregate sum equals p #X(F_p) - p^n, independent of x."""
    p, n = inst.p, inst.n
    nx = affine_point_count(inst)
    expected = CountVector(p, ((p - 1) * nx,) + (p ** n - nx,) * (p - 1))
    rep = CheckReport("mainterm", True, {"affine_points": nx, "expected_sum": p * nx - p ** n})
    for x in range(p):
        cv = aggregate_residue(inst, FqPoly(p, (-x, 1)))
        if cv != expected:
            rep.passed = False
            rep.violations.append({"x": x, "counts": list(cv.counts)})
    rep.details["charsum"] = round(charsum_real(expected), 9)
    return rep


def charsum_real(cv: CountVector) -> float:
    return ff.charsum_eval(cv, 1).real


def stratum_sum_cvs(inst: MorInstance, m: int, hist: Histogram | None = None,
                    classification: arcs.Classification | None = None) -> tuple[CountVector, CountVector, int]:
    """Exact (direct, assembled) distributions for the level-m stratum sum."""
    if not 0 <= m <= inst.d:
        raise ValueError(f"m must lie in [0, d={inst.d}]")
    p = inst.p
    hist = hist or histogram(inst)
    cl = classification or arcs.classify_all(p, inst.kd, max_enum=inst.max_enum)
    lhs_arr = cvs_at(hist, cl.tails[cl.level == m]).sum(axis=0)
    lhs = CountVector(p, tuple(int(v) for v in lhs_arr))
    rhs = CountVector.zero(p)
    nsq = 0
    for h2 in squarefree_monic(p, m):
        nsq += 1
        rhs = rhs + aggregate_residue(inst, h2)
    return lhs, rhs.scale(p ** (inst.n * (inst.d - m))), nsq


def stratum_sum(inst: MorInstance, m: int, hist: Histogram | None = None,
                classification: arcs.Classification | None = None) -> tuple[complex, complex]:
    """(direct sum of S(b) over level m, assembly from squarefree charts)."""
    lhs, rhs, _ = stratum_sum_cvs(inst, m, hist, classification)
    return ff.charsum_eval(lhs), ff.charsum_eval(rhs)


def check_stratum_sum(inst: MorInstance, m: int, hist: Histogram | None = None,
                      classification: arcs.Classification | None = None) -> CheckReport:
    """Sum over b of level m equals p^{n(d-m)} * sum over squarefree h2 of degree m."""
    lhs, rhs, nsq = stratum_sum_cvs(inst, m, hist, classification)
    lv, rv = ff.charsum_eval(lhs), ff.charsum_eval(rhs)
    ok = ff.same_charsums(lhs, rhs) and abs(lv - rv) <= 1e-6 * max(1.0, float(lhs.total))
    rep = CheckReport("stratum-sum", bool(ok), {
        "m": m, "n_squarefree": nsq, "lhs_real": lv.real, "lhs_imag": lv.imag,
        "rhs_real": rv.real, "rhs_imag": rv.imag, "abs_error": abs(lv - rv)})
    if not ok:
        rep.violations.append({"lhs": list(lhs.counts), "rhs": list(rhs.counts)})
    return rep


def squarefree_monic(p: int, m: int):
    return (h for h in monic_polys(p, m) if is_squarefree(h))


__all__ = [
    "CheckReport", "Histogram", "InstanceError", "MorInstance", "aggregate_residue",
    "check_factorisation", "check_infinity", "check_mainterm", "check_orthogonality",
    "check_power", "check_residue", "check_stratum_sum", "coeff_map", "count_mor",
    "cv_at", "histogram", "load_instance", "parse_instance", "residue_sum", "sweep",
]
