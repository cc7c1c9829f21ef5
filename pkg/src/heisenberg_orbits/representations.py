"""Irreducible representations as kernel operators on quadrature grids.

Every operator here is assembled from a closed-form Gaussian kernel in
``(u, v)``; dilations in the ``w`` variable are absorbed by an exact change
of variables and integrated with Gauss-Legendre nodes on the bump support.
"""
from __future__ import annotations

import warnings

import numpy as np

from .functions import SchwartzFunction, TildeSchwartzFunction, legendre_nodes
from .gaussian import GaussianSum
from .grid import GridOperator, GridSpec
from .groups import ModelParams, eta_lambda
from .kernels import gaussian_sum_grid
from .orbits import GridCoverageWarning

__all__ = [
    "PartialFourier",
    "partial_fourier",
    "pi_pq",
    "pi_r",
    "pi_r_kernel_gaussian",
    "trace_closed_form",
    "hs_closed_form",
    "hs_norm_check",
    "pi_tilde_s",
    "pi_tilde_pq",
    "pi_tilde_pq_kernel",
    "pi_tilde_rs",
    "tilde_rs_kernel",
    "q_rs_kernel",
    "f_r_transform",
    "fourier_grid",
    "q_rs",
    "s_tilde",
    "limit_operators",
    "W_NODES",
]

W_NODES = 64
COVERAGE_TOL = 1e-8


def _yidx(n):
    return list(range(n, 2 * n))


def _xidx(n):
    return list(range(n))


class PartialFourier:
    """``fhat(p, q, r) = int f(x, y, r) e^{-2 pi i (p.x + q.y)} dx dy``, slice by slice."""

    def __init__(self, f: SchwartzFunction):
        self.f = f
        self.n = f.n

    def slice(self, r: float) -> GaussianSum:
        return self.f.slice(r).fourier(range(2 * self.n), sign=-1)

    def __call__(self, p, q, r) -> complex:
        z = np.concatenate([np.atleast_1d(p), np.atleast_1d(q)]).astype(float)
        return complex(self.slice(r)(z))


def partial_fourier(f: SchwartzFunction) -> PartialFourier:
    return PartialFourier(f)


def pi_pq(f: SchwartzFunction, p, q) -> complex:
    """One-dimensional representation at the point orbit ``(p, q, 0)``."""
    return partial_fourier(f)(p, q, 0.0)


def _require_nonzero(r):
    if r == 0:
        raise ValueError("r must be nonzero for the generic representations")


def pi_r_kernel_gaussian(params: ModelParams, slice_xy: GaussianSum, r: float) -> GaussianSum:
    """Kernel ``K(u, v) = F_y f(v - u, eta(r) u)`` as a Gaussian sum in ``(u, v)``."""
    n = params.n
    eta = float(eta_lambda(params, r))
    fy = slice_xy.fourier(_yidx(n), sign=-1)  # coordinates (x, q)
    I, Z = np.eye(n), np.zeros((n, n))
    M = np.block([[-I, I], [eta * I, Z]])
    return fy.pullback(M)


def _check_grid(params, grid):
    if grid.n != params.n:
        raise ValueError(f"grid dimension {grid.n} differs from n={params.n}")


def _warn_coverage(op: GridOperator, exact_hs_sq: float, what: str, tol=COVERAGE_TOL):
    if exact_hs_sq <= 0:
        return
    missing = abs(exact_hs_sq - op.hs_norm_sq()) / exact_hs_sq
    if missing > tol:
        warnings.warn(
            f"{what}: kernel mass outside the grid {missing:.2e} exceeds {tol:.0e}",
            GridCoverageWarning, stacklevel=3,
        )


def pi_r(params: ModelParams, f: SchwartzFunction, r: float, grid: GridSpec,
         check_coverage: bool = True, backend=None) -> GridOperator:
    """Generic representation ``pi_r(f)`` on ``L^2(R^n)`` as a grid operator."""
    _require_nonzero(r)
    _check_grid(params, grid)
    g = pi_r_kernel_gaussian(params, f.slice(r), r)
    K = gaussian_sum_grid(g, grid.nodes, grid.nodes, backend=backend)
    op = GridOperator.on(K, grid)
    if check_coverage and g.nterms:
        _warn_coverage(op, g.l2_norm_sq(), "pi_r")
    return op


def trace_closed_form(params: ModelParams, f: SchwartzFunction, r: float) -> complex:
    """Orbit integral of ``fhat`` against the canonical measure ``|eta|^{-n} dp dq``."""
    _require_nonzero(r)
    eta = float(eta_lambda(params, r))
    return partial_fourier(f).slice(r).total() / abs(eta) ** params.n


def hs_closed_form(params: ModelParams, f: SchwartzFunction, r: float) -> float:
    """``int |fhat(p, q, r)|^2 dtheta``."""
    _require_nonzero(r)
    eta = float(eta_lambda(params, r))
    return partial_fourier(f).slice(r).l2_norm_sq() / abs(eta) ** params.n


def hs_norm_check(params: ModelParams, f: SchwartzFunction, r: float, grid: GridSpec):
    """``(grid HS norm^2 of pi_r(f), orbit L^2 norm^2 of fhat)``."""
    lhs = pi_r(params, f, r, grid, check_coverage=False).hs_norm_sq()
    return lhs, hs_closed_form(params, f, r)


# ---------------------------------------------------------------------------
# representations of the extended algebra
# ---------------------------------------------------------------------------

def _w_integral(bump, weight_fn, m=W_NODES):
    lo, hi = bump.support
    w, ww = legendre_nodes(lo, hi, m)
    return np.sum(ww * bump(w) * weight_fn(w))


def pi_tilde_s(f: TildeSchwartzFunction, s: float, w_nodes: int = W_NODES) -> complex:
    """``int f(x, y, 0, w) e^{-2 pi i s w} dx dy dw``."""
    total = 0j
    for t in f.terms:
        c = t.rbump(0.0)
        if c == 0.0:
            continue
        total += c * t.gauss.total() * _w_integral(
            t.wbump, lambda w: np.exp(-2j * np.pi * s * w), w_nodes)
    return complex(total)


def pi_tilde_pq_kernel(f: TildeSchwartzFunction, p, q, d, d2) -> np.ndarray:
    """``K(d, d') = int f(x, y, 0, d' - d) e^{-2 pi i (e^d p.x + e^{-d} q.y)} dx dy``."""
    n = f.n
    p = np.atleast_1d(np.asarray(p, float))
    q = np.atleast_1d(np.asarray(q, float))
    d = np.asarray(d, float)
    d2 = np.asarray(d2, float)
    K = np.zeros((d.size, d2.size), dtype=complex)
    for t in f.terms:
        c = t.rbump(0.0)
        if c == 0.0:
            continue
        ghat = t.gauss.fourier(range(2 * n), sign=-1)
        pts = np.concatenate([np.outer(np.exp(d), p), np.outer(np.exp(-d), q)], axis=1)
        K += c * ghat(pts)[:, None] * t.wbump(d2[None, :] - d[:, None])
    return K


def pi_tilde_pq(f: TildeSchwartzFunction, p, q, grid: GridSpec) -> GridOperator:
    """Representation at the two-dimensional orbit through ``(p, q)`` on ``L^2(R)``."""
    if grid.n != 1:
        raise ValueError("the d-line grid is one-dimensional")
    d = grid.nodes[:, 0]
    return GridOperator.on(pi_tilde_pq_kernel(f, p, q, d, d), grid)


def _w_terms(f: TildeSchwartzFunction, r, w_nodes):
    """Yield ``(term, w, weight)`` over Gauss-Legendre nodes of each w-bump."""
    for t in f.terms:
        c = t.rbump(r)
        if c == 0.0:
            continue
        w, ww = legendre_nodes(*t.wbump.support, w_nodes)
        yield t, w, c * ww * t.wbump(w)


def tilde_rs_kernel(params: ModelParams, f: TildeSchwartzFunction, r: float, s: float,
                    w_nodes: int = W_NODES) -> GaussianSum:
    """Kernel of the generic extended representation as a Gaussian sum in ``(u, v)``.

    ``K(u, v) = int F_y f(e^w v - u, eta u, r, w) e^{-2 pi i s w} e^{n w/2} dw``.
    At ``r = 0`` this is the kernel of the limit operator ``T``.
    """
    n = params.n
    eta = float(eta_lambda(params, r))
    I, Z = np.eye(n), np.zeros((n, n))
    out = GaussianSum.zeros(2 * n)
    for t, w, cw in _w_terms(f, r, w_nodes):
        fy = t.gauss.fourier(_yidx(n), sign=-1)
        for wi, ci in zip(w, cw):
            M = np.block([[-I, np.exp(wi) * I], [eta * I, Z]])
            out = out + fy.pullback(M).scale(ci * np.exp(-2j * np.pi * s * wi + 0.5 * n * wi))
    return out


def q_rs_kernel(params: ModelParams, f: TildeSchwartzFunction, r: float, s: float,
                w_nodes: int = W_NODES) -> GaussianSum:
    """Kernel of the Fourier-conjugated representation, evaluated directly.

    ``K(v, t) = int F_x f(-eta e^{-w} t, e^{-w} t - v, r, w) e^{-2 pi i s w} e^{-n w/2} dw``;
    at ``r = 0`` this is the kernel of the limit operator ``Q``.
    """
    n = params.n
    eta = float(eta_lambda(params, r))
    I, Z = np.eye(n), np.zeros((n, n))
    out = GaussianSum.zeros(2 * n)
    for t, w, cw in _w_terms(f, r, w_nodes):
        fx = t.gauss.fourier(_xidx(n), sign=-1)  # coordinates (p, y)
        for wi, ci in zip(w, cw):
            e = np.exp(-wi)
            M = np.block([[Z, -eta * e * I], [-I, e * I]])
            out = out + fx.pullback(M).scale(ci * np.exp(-2j * np.pi * s * wi - 0.5 * n * wi))
    return out


def pi_tilde_rs(params: ModelParams, f: TildeSchwartzFunction, r: float, s: float,
                grid: GridSpec, w_nodes: int = W_NODES, backend=None) -> GridOperator:
    """Generic representation of the extended algebra on ``L^2(R^n)``."""
    _require_nonzero(r)
    _check_grid(params, grid)
    g = tilde_rs_kernel(params, f, r, s, w_nodes)
    return GridOperator.on(gaussian_sum_grid(g, grid.nodes, grid.nodes, backend=backend), grid)


def fourier_grid(points: int, eta: float = 1.0, n: int = 1) -> GridSpec:
    """Periodic grid on which ``e(-eta u.v)`` sampled by quadrature is exactly unitary.

    With nodes ``(j - N/2) h`` and ``N h^2 |eta| = 1`` the sampled kernel is a
    centred discrete Fourier matrix.
    """
    return GridSpec(float(0.5 * np.sqrt(points / abs(eta))), points, "periodic", n)


def _fourier_pair(eta: float, grid: GridSpec):
    x, _ = grid.nodes_1d()
    h = x[1] - x[0]
    if 2.0 * abs(eta) * grid.extent * h > 1.0 + 1e-12:
        warnings.warn(
            f"grid under-resolves the phase e(eta u.v) for eta={eta:.3g}; "
            "use fourier_grid()", GridCoverageWarning, stacklevel=3)
    X = grid.nodes
    phase = np.exp(-2j * np.pi * eta * (X @ X.T)) * abs(eta) ** (0.5 * grid.n)
    return GridOperator.on(phase, grid), GridOperator.on(phase.conj(), grid)


def f_r_transform(params: ModelParams, r: float, grid: GridSpec | None = None,
                  points: int = 128):
    """The unitary ``xi -> int xi(u) e^{-2 pi i eta u.v} |eta|^{n/2} du`` and its inverse.

    Without ``grid`` the operators live on :func:`fourier_grid`, where the
    discretization is unitary to roundoff.
    """
    _require_nonzero(r)
    eta = float(eta_lambda(params, r))
    grid = fourier_grid(points, eta, params.n) if grid is None else grid
    _check_grid(params, grid)
    return _fourier_pair(eta, grid)


def q_rs(params: ModelParams, f: TildeSchwartzFunction, r: float, s: float,
         grid: GridSpec | None = None, points: int = 128, w_nodes: int = W_NODES,
         backend=None):
    """``(F_r pi_r,s(f) F_r^{-1}, kernel evaluated directly)`` on the same grid."""
    F, Finv = f_r_transform(params, r, grid, points)
    g = F.grid
    conj = F @ pi_tilde_rs(params, f, r, s, g, w_nodes, backend) @ Finv
    direct = GridOperator.on(
        gaussian_sum_grid(q_rs_kernel(params, f, r, s, w_nodes), g.nodes, g.nodes,
                          backend=backend), g)
    return conj, direct


def s_tilde(f: TildeSchwartzFunction, grid: GridSpec):
    """Conjugate ``S(f)`` by the unitary discrete Fourier map on a periodic d-grid.

    ``S`` is translation invariant, so on one period it is discretized as a
    circular convolution; the discrete Fourier map then diagonalizes it.
    Returns ``(operator on the s-grid, s nodes, U S U^dagger)``.
    """
    if grid.n != 1:
        raise ValueError("the d-line grid is one-dimensional")
    N = grid.points
    L = float(grid.extent)
    h = 2 * L / N
    d = -L + h * np.arange(N)
    s = (np.arange(N) - N // 2) / (N * h)
    diff = d[None, :] - d[:, None]
    wrapped = (diff + L) % (2 * L) - L
    # F(w) = int f(x, y, 0, w) dx dy
    M = np.zeros((N, N), dtype=complex)
    for t in f.terms:
        M += t.rbump(0.0) * t.gauss.total() * t.wbump(wrapped)
    M *= h
    U = np.exp(-2j * np.pi * np.outer(s, d)) / np.sqrt(N)
    conj = U @ M @ U.conj().T
    ds = 1.0 / (N * h)
    op = GridOperator(conj / ds, s[:, None], np.full(N, ds))
    return op, s, conj


def limit_operators(params: ModelParams, f: TildeSchwartzFunction, s: float,
                    grid: GridSpec, d_grid: GridSpec | None = None,
                    w_nodes: int = W_NODES, backend=None) -> dict:
    """Materialize the reducible limit representations ``S, S~, T, T~, Q``.

    ``S`` lives on ``d_grid`` (default: a copy of ``grid``), ``S~`` on its
    periodic version, ``T`` and ``Q`` on ``grid`` and ``T~`` on the
    :func:`fourier_grid` with the same number of points.
    """
    _check_grid(params, grid)
    d_grid = GridSpec(grid.extent, grid.points, grid.rule, 1) if d_grid is None else d_grid
    S = pi_tilde_pq(f, np.zeros(params.n), np.zeros(params.n), d_grid)
    S_t, _, _ = s_tilde(f, GridSpec(d_grid.extent, d_grid.points, "periodic", 1))

    def assemble(g, on):
        return GridOperator.on(gaussian_sum_grid(g, on.nodes, on.nodes, backend=backend), on)

    T = assemble(tilde_rs_kernel(params, f, 0.0, s, w_nodes), grid)
    Q = assemble(q_rs_kernel(params, f, 0.0, s, w_nodes), grid)
    fg = fourier_grid(grid.points, 1.0, params.n)
    F, Finv = _fourier_pair(1.0, fg)
    T_t = F @ assemble(tilde_rs_kernel(params, f, 0.0, s, w_nodes), fg) @ Finv
    return {"S": S, "S_tilde": S_t, "T": T, "T_tilde": T_t, "Q": Q}
