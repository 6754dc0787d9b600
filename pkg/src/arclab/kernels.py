"""Kernel dispatch: compiled extension when importable, numpy fallback otherwise.

Set ``ARCLAB_PURE_PYTHON=1`` to force the fallback. ``BACKEND`` records the
choice. All entry points reduce their integer inputs mod p first.
"""

from __future__ import annotations

import os

import numpy as np

from . import _pykernels

_impl = _pykernels
BACKEND = "python"
if not os.environ.get("ARCLAB_PURE_PYTHON"):
    try:
        from . import _ckernels as _compiled
    except ImportError:  # pragma: no cover - depends on the build
        _compiled = None
    if _compiled is not None:
        _impl = _compiled
        BACKEND = "cython"


def available_backends() -> dict:
    out = {"python": _pykernels}
    try:
        from . import _ckernels
        out["cython"] = _ckernels
    except ImportError:  # pragma: no cover
        pass
    return out


def _i64(a, p: int, ndim: int) -> np.ndarray:
    arr = np.ascontiguousarray(np.asarray(a, dtype=np.int64) % p)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-d array, got shape {arr.shape}")
    return arr


def rank_mod_p(mat, p: int, impl=None) -> int:
    mat = np.asarray(mat, dtype=np.int64)
    if mat.ndim != 2 or mat.size == 0:
        return 0
    return int((impl or _impl).rank_mod_p(_i64(mat, p, 2), p))


def hankel_levels(tails, p: int, impl=None) -> np.ndarray:
    """Arc level of each row: least m with the Hankel rank of the row at most m."""
    tails = _i64(tails, p, 2)
    if tails.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    return np.asarray((impl or _impl).hankel_levels(tails, p), dtype=np.int64)


def multilinear_zero_count(tensor, nvar: int, nfac: int, p: int, impl=None) -> int:
    """Common zeros in (F_p^nvar)^nfac of the rows of a flattened multilinear system."""
    tensor = _i64(tensor, p, 2)
    if tensor.shape[1] != nvar ** nfac:
        raise ValueError("tensor width does not match nvar**nfac")
    if tensor.shape[0] == 0:
        return p ** (nvar * nfac)
    return int((impl or _impl).multilinear_zero_count(tensor, nvar, nfac, p))


def poly_value_table(exps, coeffs, nvar: int, p: int, impl=None) -> np.ndarray:
    exps = np.ascontiguousarray(np.asarray(exps, dtype=np.int64).reshape(-1, nvar))
    coeffs = _i64(np.asarray(coeffs).reshape(-1), p, 1)
    return np.asarray((impl or _impl).poly_value_table(exps, coeffs, nvar, p), dtype=np.int64)
