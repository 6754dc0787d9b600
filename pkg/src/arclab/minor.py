"""Minor-arc arithmetic: multilinear Weyl systems, N(alpha), the minor-arc bound.

Forms are monomial lists (see :mod:`arclab.expsum`). A degree-k form is
converted to its symmetric coefficient tensor c with
f0(x) = sum_{j_1..j_k} c[j_1..j_k] x_{j_1}..x_{j_k}; the multilinear forms
below carry the extra factor k! so no division by k! is ever needed when
counting zeros.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import arcs, ff, kernels
from .expsum import (CheckReport, InstanceError, MorInstance, Monomials, common_zero_exists,
                     homogeneous_part, normalise, partial, total_degree, value_table)


@dataclass(frozen=True)
class SymForm:
    """k! times the symmetric coefficient tensor of a degree-k form, mod p."""

    p: int
    k: int
    n: int
    tensor: np.ndarray  # shape (n,)*k

    @classmethod
    def from_monomials(cls, mons: Monomials, n: int, k: int, p: int) -> "SymForm":
        if p <= k:
            raise ValueError(f"need p > k (p={p}, k={k})")
        t = np.zeros((n,) * k, dtype=np.int64)
        for e, c in normalise(mons, p):
            if sum(e) != k:
                continue
            # a monomial with exponent e spreads c * prod(e_i!) / k! over each index
            # arrangement; times k! that is c * prod(e_i!) per arrangement
            idx = [j for j, ej in enumerate(e) for _ in range(ej)]
            w = c * math.prod(math.factorial(ej) for ej in e) % p
            for perm in set(itertools.permutations(idx)):
                t[perm] = (t[perm] + w) % p
        return cls(p, k, n, t)

    def is_symmetric(self) -> bool:
        return all(np.array_equal(self.tensor, self.tensor.transpose(perm))
                   for perm in itertools.permutations(range(self.k)))


def psi_forms(f0: Monomials, n: int, k: int, p: int) -> np.ndarray:
    """Coefficient tensors of the n forms Psi_j: out[j, j_1..j_{k-1}]."""
    sf = SymForm.from_monomials(f0, n, k, p)
    return np.moveaxis(sf.tensor, -1, 0).copy()


def _system_tensor(f0: Monomials, b, n: int, k: int, d: int, p: int) -> np.ndarray:
    """Rows (i, j) -> c_{j_1..j_{k-1} j} b_{i_1+..+i_{k-1}+i+1} over the flattened z's."""
    Psi = psi_forms(f0, n, k, p)  # (n, n, .., n)
    b = [int(v) % p for v in b]
    r = k - 1
    nv = n * d
    # index of a variable (i, j) is j*d + i, matching the a-ordering of the coefficient map
    var_i = np.arange(nv) % d
    var_j = np.arange(nv) // d
    out = np.zeros((nv,) + (nv,) * r, dtype=np.int64)
    for row in range(nv):
        i, j = row % d, row // d
        for cols in itertools.product(range(nv), repeat=r):
            js = tuple(var_j[c] for c in cols)
            coef = Psi[(j,) + js]
            if coef:
                out[(row,) + cols] = coef * b[int(sum(var_i[c] for c in cols)) + i] % p
    return out.reshape(nv, nv ** r)


def system_window(k: int, d: int) -> int:
    """Number of leading tail entries b_1..b_w the system can see."""
    return k * (d - 1) + 1


def count_system(f0: Monomials, b, n: int, k: int, d: int, p: int,
                 max_enum: int | None = None) -> int:
    """Exact number of solution tuples of the multilinear system attached to b."""
    arcs.guard(p ** ((k - 1) * n * d), max_enum, "multilinear system")
    T = _system_tensor(f0, b, n, k, d, p)
    return kernels.multilinear_zero_count(T, n * d, k - 1, p)


def count_Nalpha(f0: Monomials, b, n: int, k: int, d: int, p: int,
                 max_enum: int | None = None, chunk: int = 256) -> int:
    """N(alpha) by enumerating polynomial tuples u with deg < d.

    alpha = sum b_r T^-r; the tuple is admissible when alpha * Psi_j(u) has no
    T^-1..T^-d terms for any j.
    """
    arcs.guard(p ** ((k - 1) * n * d), max_enum, "polynomial tuple enumeration")
    Psi = psi_forms(f0, n, k, p)
    b = np.array([int(v) % p for v in b], dtype=np.int64)
    L = (k - 1) * (d - 1) + 1  # length of Psi_j(u)
    # window matrix: coefficient of T^-t in alpha * T^e is b_{e+t}
    W = np.zeros((L, d), dtype=np.int64)
    for e in range(L):
        for t in range(1, d + 1):
            if e + t <= len(b):
                W[e, t - 1] = b[e + t - 1]
    idx = np.arange(p ** (n * d), dtype=np.int64)
    U = np.stack([(idx // p ** s) % p for s in range(n * d)], axis=1).reshape(-1, n, d)
    r = k - 1
    axes = list(range(1, r + 1))
    total = 0
    for head in itertools.product(range(len(U)), repeat=r - 1):
        # product of the fixed leading factors: shape (n,)*(r-1) + (length,)
        prod = np.ones(1, dtype=np.int64)
        for h in head:
            prod = _outer_conv(prod, U[h], p)
        for s in range(0, len(U), chunk):
            last = U[s:s + chunk]
            terms = _batch_outer_conv(prod, last, p)  # (B,) + (n,)*r + (L,)
            psi = np.moveaxis(np.tensordot(terms, Psi, axes=(axes, axes)), -1, 1) % p
            win = psi @ W % p  # (B, n, d)
            total += int(np.all(win.reshape(len(last), -1) == 0, axis=1).sum())
    return total


def _outer_conv(prod: np.ndarray, u: np.ndarray, p: int) -> np.ndarray:
    """Outer product over the variable axes with polynomial multiplication."""
    shape = prod.shape[:-1]
    la, lb = prod.shape[-1], u.shape[-1]
    out = np.zeros(shape + (u.shape[0], la + lb - 1), dtype=np.int64)
    for e in range(lb):
        out[..., e:e + la] += prod[..., None, :] * u[:, e].reshape((1,) * len(shape) + (-1, 1))
    return out % p


def _batch_outer_conv(prod: np.ndarray, last: np.ndarray, p: int) -> np.ndarray:
    B, n, d = last.shape
    shape = prod.shape[:-1]
    la = prod.shape[-1]
    out = np.zeros((B,) + shape + (n, la + d - 1), dtype=np.int64)
    for e in range(d):
        out[..., e:e + la] += (prod[None, ..., None, :]
                               * last[:, :, e].reshape((B,) + (1,) * len(shape) + (n, 1)))
    return out % p


# -- Weyl systems V(G) -------------------------------------------------------------

def weyl_tensor(G: Monomials, N: int, p: int, k: int | None = None) -> np.ndarray:
    """Rows i of the (k-1)-linear system defining V(G), flattened."""
    k = total_degree(G) if k is None else k
    sf = SymForm.from_monomials(homogeneous_part(G, k), N, k, p)
    return np.moveaxis(sf.tensor, -1, 0).reshape(N, N ** (k - 1)).copy()


def vg_count(G: Monomials, N: int, p: int, r: int = 1, max_enum: int | None = None,
             k: int | None = None) -> int:
    """#V(G)(F_{p^r}) for r in {1, 2}, from the multilinear characterisation.

    ``k`` is the nominal degree; it defaults to the actual degree of G and must
    be given for G = 0.
    """
    k = total_degree(G) if k is None else k
    if k < 1:
        return 1
    if r not in (1, 2):
        raise ValueError("only F_p and F_p^2 are supported")
    q = p ** r
    arcs.guard(q ** (N * (k - 1)), max_enum, "V(G) enumeration")
    if k == 1:
        return 1
    T = weyl_tensor(G, N, p, k)
    if r == 1:
        return kernels.multilinear_zero_count(T, N, k - 1, p)
    return _fp2_multilinear_zero_count(T, N, k - 1, p)


def _fp2_multilinear_zero_count(T: np.ndarray, nvar: int, nfac: int, p: int) -> int:
    F = ff.Fp2(p)
    q = p * p
    neq = T.shape[0]
    shaped = T.reshape(neq, nvar ** (nfac - 1), nvar) % p
    # all points of F_{p^2}^nvar as (re, im) arrays, shape (q^nvar, nvar)
    idx = np.arange(q ** nvar, dtype=np.int64)
    vals = np.stack([(idx // q ** i) % q for i in range(nvar)], axis=1)
    re, im = vals % p, vals // p
    total = 0
    for zs in itertools.product(range(q ** nvar), repeat=nfac - 1):
        wr = np.ones(1, dtype=np.int64)
        wi = np.zeros(1, dtype=np.int64)
        for z in zs:
            zr, zi = re[z], im[z]
            wr, wi = F.mul((wr[:, None], wi[:, None]), (zr[None, :], zi[None, :]))
            wr, wi = wr.ravel(), wi.ravel()
        mr = np.einsum("o,eoi->ei", wr, shaped) % p
        mi = np.einsum("o,eoi->ei", wi, shaped) % p
        mat = [[(int(mr[e, i]), int(mi[e, i])) for i in range(nvar)] for e in range(neq)]
        total += q ** (nvar - F.rank(mat))
    return total


def vg_count_definitional(G: Monomials, N: int, p: int, max_enum: int | None = None) -> int:
    """#{(y_1..y_{k-1}) : the (k-1)-fold difference of G is constant in x}."""
    k = total_degree(G)
    arcs.guard(p ** (N * k), max_enum, "definitional V(G) scan")
    tab = value_table(G, N, p)
    pts = np.arange(p ** N, dtype=np.int64)
    digits = np.stack([(pts // p ** i) % p for i in range(N)], axis=1)
    w = p ** np.arange(N, dtype=np.int64)
    count = 0
    for ys in itertools.product(range(p ** N), repeat=k - 1):
        acc = np.zeros(p ** N, dtype=np.int64)
        for eps in itertools.product((0, 1), repeat=k - 1):
            shift = sum((digits[y] * e for y, e in zip(ys, eps)), np.zeros(N, dtype=np.int64))
            moved = ((digits + shift) % p) @ w
            acc += (-1) ** (k - 1 - sum(eps)) * tab[moved]
        if np.all(acc % p == acc[0] % p):
            count += 1
    return count


def random_form(N: int, k: int, p: int, rng: np.random.Generator, homogeneous: bool = False) -> Monomials:
    """Random polynomial of degree exactly k in N variables."""
    exps = [e for deg in range(k + 1) for e in _exponents(N, deg)
            if deg == k or not homogeneous]
    while True:
        coeffs = rng.integers(0, p, size=len(exps))
        mons = normalise(list(zip(exps, coeffs.tolist())), p)
        if total_degree(mons) == k:
            return mons


def _exponents(N: int, deg: int):
    for c in itertools.combinations_with_replacement(range(N), deg):
        e = [0] * N
        for i in c:
            e[i] += 1
        yield tuple(e)


@dataclass
class WeylReport:
    N: int
    p: int
    k: int
    abs_S: float
    abs_S_neg: float
    differenced: float
    vg: int
    lhs: float
    rhs: int
    conj_ok: bool
    shear_ok: bool
    weyl_ok: bool

    @property
    def passed(self) -> bool:
        return self.conj_ok and self.shear_ok and self.weyl_ok

    def to_json(self) -> dict:
        return dict(self.__dict__, passed=self.passed)


def _charsum_from_table(tab: np.ndarray, p: int) -> complex:
    cv = np.bincount(tab % p, minlength=p)
    return complex(np.dot(cv, np.exp(2j * np.pi * np.arange(p) / p)))


def weyl_check(G: Monomials, N: int, p: int, rel_tol: float = 1e-6,
               max_enum: int | None = None, k: int | None = None) -> WeylReport:
    k = total_degree(G) if k is None else k
    arcs.guard(p ** (2 * N), max_enum, "differenced sum")
    tab = value_table(G, N, p)
    S = _charsum_from_table(tab, p)
    neg = value_table(tuple((e, -c) for e, c in G), N, p)
    S_neg = _charsum_from_table(neg, p)
    # sum over (x, h) of psi(G(x + h) - G(x)), by table lookup on base-p digits
    pts = np.arange(p ** N, dtype=np.int64)
    digits = np.stack([(pts // p ** i) % p for i in range(N)], axis=1)
    w = p ** np.arange(N, dtype=np.int64)
    hist = np.zeros(p, dtype=np.int64)
    for h in range(p ** N):
        moved = ((digits + digits[h]) % p) @ w
        hist += np.bincount((tab[moved] - tab) % p, minlength=p)
    diff = complex(np.dot(hist, np.exp(2j * np.pi * np.arange(p) / p)))
    vg = vg_count(G, N, p, 1, max_enum, k)
    a = abs(S)
    scale = max(1.0, a * a)
    lhs = a ** (2 ** (k - 1))
    rhs = p ** (N * (2 ** (k - 1) - (k - 1))) * vg
    return WeylReport(
        N, p, k, a, abs(S_neg), diff.real, vg, lhs, rhs,
        conj_ok=abs(a - abs(S_neg)) <= rel_tol * max(1.0, a),
        shear_ok=abs(diff - a * a) <= rel_tol * scale,
        weyl_ok=lhs <= rhs * (1 + rel_tol),
    )


# -- the minor-arc bound ------------------------------------------------------------

def minor_exponent(inst: MorInstance, m: int) -> int:
    return inst.d * inst.n * (inst.k - 1) - inst.n * (m // (inst.k - 1))


def minor_bound_check(inst: MorInstance, m: int, samples: int | None = None, seed: int = 0,
                      workers: int = 1, classification: arcs.Classification | None = None) -> CheckReport:
    """max over b outside A_m of N(alpha) / p^(dn(k-1) - n floor(m/(k-1))).

    N(alpha) only sees b_1..b_w (w = k(d-1)+1), so b's are grouped by that
    prefix and each distinct system is counted once.
    """
    p, k, n, d, kd = inst.p, inst.k, inst.n, inst.d, inst.kd
    if not d <= m <= kd // 2:
        raise ValueError(f"need d <= m <= kd/2 (d={d}, kd={kd}, m={m})")
    cl = classification or arcs.classify_all(p, kd, workers, inst.max_enum)
    outside = cl.tails[cl.level > m]
    if samples is not None and len(outside) > samples:
        rng = np.random.default_rng(seed)
        pick = np.sort(rng.choice(len(outside), size=samples, replace=False))
        outside = outside[pick]
    wlen = min(system_window(k, d), kd)
    prefixes = np.unique(outside[:, :wlen], axis=0) if len(outside) else np.zeros((0, wlen), dtype=np.int64)
    f0 = inst.f0
    counts = _count_many(f0, prefixes, n, k, d, p, workers, inst.max_enum)
    expo = minor_exponent(inst, m)
    rep = CheckReport("bound", True, {"m": m, "p": p, "exponent": expo,
                                      "n_points": int(len(outside)), "n_systems": int(len(prefixes)),
                                      "sampled": samples is not None, "vacuous": len(outside) == 0})
    if len(prefixes):
        best = int(np.argmax(counts))
        rep.details.update({"max_N": int(counts[best]), "max_ratio": counts[best] / p ** expo,
                            "argmax_prefix": [int(v) for v in prefixes[best]]})
    else:
        rep.details.update({"max_N": None, "max_ratio": None, "argmax_prefix": None})
    return rep


def _count_many(f0, prefixes, n, k, d, p, workers, max_enum) -> list[int]:
    from concurrent.futures import ThreadPoolExecutor

    def one(row):
        return count_system(f0, row, n, k, d, p, max_enum)

    rows = list(prefixes)
    if workers <= 1 or len(rows) < 2:
        return [one(r) for r in rows]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(one, rows))


# -- dimension fit ------------------------------------------------------------------

def dimv_fit(f0: Monomials, n: int, k: int, p: int, max_enum: int | None = None) -> dict:
    """Dimension of {Psi_j = 0 for all j} from point counts over F_p and F_p^2."""
    f0 = normalise(homogeneous_part(f0, k), p)
    grads = [partial(f0, i, p) for i in range(n)]
    for ext in (1, 2):
        if common_zero_exists(grads, n, p, True, ext, max_enum):
            raise InstanceError("f0 = 0 is singular; the dimension bound does not apply")
    T = np.moveaxis(SymForm.from_monomials(f0, n, k, p).tensor, -1, 0).reshape(n, n ** (k - 1))
    arcs.guard(p ** (2 * n * (k - 1)), max_enum, "F_p^2 point count")
    c1 = kernels.multilinear_zero_count(T, n, k - 1, p)
    c2 = _fp2_multilinear_zero_count(T, n, k - 1, p)
    D = round(math.log(c2 / c1, p))
    norm1, norm2 = c1 / p ** D, c2 / p ** (2 * D)
    consistent = 0.5 <= norm2 / norm1 <= 2.0
    bound = (k - 2) * n
    return {"count_p": c1, "count_p2": c2, "dim": D, "bound": bound,
            "normalised": [norm1, norm2], "consistent": consistent,
            "passed": bool(D <= bound and consistent)}
