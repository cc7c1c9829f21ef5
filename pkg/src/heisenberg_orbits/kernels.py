"""Backend selection for the grid kernels.

The compiled extension is used when it imports; set
``HEISENBERG_ORBITS_BACKEND=python`` to force the numpy fallback.
"""
from __future__ import annotations

import logging
import os

import numpy as np

from . import _pykernels

LOGGER = logging.getLogger(__name__)

_py_grid = _pykernels.gaussian_grid
try:
    if os.environ.get("HEISENBERG_ORBITS_BACKEND", "").lower() == "python":
        raise ImportError("forced python backend")
    from ._ckernels import gaussian_grid as _c_grid
    BACKEND = "cython"
except ImportError as exc:  # pragma: no cover - depends on the build
    LOGGER.debug("compiled kernels unavailable (%s); using numpy", exc)
    _c_grid = None
    BACKEND = "python"

__all__ = ["BACKEND", "available_backends", "gaussian_sum_grid"]


def available_backends():
    return ["cython", "python"] if _c_grid is not None else ["python"]


def gaussian_sum_grid(g, U, V, backend: str | None = None) -> np.ndarray:
    """Evaluate a GaussianSum in ``(u, v)`` on all pairs of grid nodes.

    ``g`` has ``k = nu + nv`` coordinates, the first ``nu`` paired with the
    rows ``U`` of shape ``(NU, nu)`` and the rest with ``V`` of shape ``(NV, nv)``.
    """
    U = np.ascontiguousarray(U, dtype=float)
    V = np.ascontiguousarray(V, dtype=float)
    nu, nv = U.shape[1], V.shape[1]
    if g.k != nu + nv:
        raise ValueError("Gaussian dimension does not match the grid")
    keep = g.w != 0
    if not np.any(keep):
        return np.zeros((U.shape[0], V.shape[0]), dtype=complex)
    A, b, w = g.A[keep], g.b[keep], g.w[keep]
    Auu, Auv, Avv = A[:, :nu, :nu], A[:, :nu, nu:], A[:, nu:, nu:]
    qu = -np.einsum("pi,tij,pj->tp", U, Auu, U) + b[:, :nu] @ U.T
    qv = -np.einsum("pi,tij,pj->tp", V, Avv, V) + b[:, nu:] @ V.T
    uc = np.einsum("pi,tij->tpj", U, Auv)
    log_c = np.log(w.astype(complex))
    args = (
        np.ascontiguousarray(log_c),
        np.ascontiguousarray(qu),
        np.ascontiguousarray(qv),
        np.ascontiguousarray(uc),
        V,
    )
    use = backend or BACKEND
    if use == "cython":
        if _c_grid is None:
            raise RuntimeError("compiled backend not built")
        return _c_grid(*args)
    return _py_grid(*args)
