"""Mod-p numeric kernels with a compiled backend and a numpy fallback.

The compiled extension is used when importable; set POLARIS_PURE=1 to
force the fallback.  ``BACKEND`` names the active implementation.
"""

from __future__ import annotations

import os

import numpy as np

from . import _pykernels

if os.environ.get("POLARIS_PURE", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels
        BACKEND = "python"

eval_poly_mod_p = _impl.eval_poly_mod_p
rref_mod_p = _impl.rref_mod_p
rank_mod_p = _impl.rank_mod_p
batch_rank_mod_p = _impl.batch_rank_mod_p
nullspace_mod_p = _impl.nullspace_mod_p
batch_det_mod_p = _impl.batch_det_mod_p


def poly_arrays(f, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Exponent matrix and coefficient vector of an MPoly reduced mod p."""
    g = f.reduce_mod(p)
    items = list(g.terms.items())
    if not items:
        return np.zeros((0, f.nvars), dtype=np.int64), np.zeros(0, dtype=np.int64)
    exps = np.array([e for e, _ in items], dtype=np.int64).reshape(len(items), f.nvars)
    coeffs = np.array([c for _, c in items], dtype=np.int64)
    return exps, coeffs


def eval_mod_p(f, points, p: int) -> np.ndarray:
    """Values of f (rational or mod-p MPoly) at integer points, mod p."""
    exps, coeffs = poly_arrays(f, p)
    pts = np.ascontiguousarray(np.asarray(points, dtype=np.int64) % p)
    if exps.shape[0] == 0:
        return np.zeros(pts.shape[0], dtype=np.int64)
    return eval_poly_mod_p(exps, coeffs, pts, p)


def matmul_mod_p(a, b, p: int) -> np.ndarray:
    """a @ b mod p without int64 overflow."""
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    inner = a.shape[-1]
    if (p - 1) ** 2 * max(inner, 1) < 2**63:
        return a @ b % p
    return (a.astype(object) @ b.astype(object) % p).astype(np.int64)
