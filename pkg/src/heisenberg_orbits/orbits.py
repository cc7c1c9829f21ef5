"""Dressing actions, orbit classification and the symplectic structure on orbits.

Lie-algebra vectors of ``Htilde`` are plain arrays ``(a, b, c, d)`` laid out as
``[a_1..a_n, b_1..b_n, c, d]``; for ``H`` the trailing ``d`` is absent.
Tangent vectors at a point of ``Gtilde`` use the layout ``[p.., q.., r, s]``.
"""
from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import null_space

from .groups import (
    GroupElement,
    Kind,
    ModelParams,
    embed,
    eta_lambda,
    factorize,
    inverse,
    mul,
)

__all__ = [
    "OrbitKind",
    "Orbit",
    "GridCoverageWarning",
    "dressing_g",
    "dressing_gt",
    "dressing_via_double",
    "infinitesimal_dressing",
    "dressing_jacobian",
    "poisson_bracket",
    "classify_orbit",
    "stabilizer_basis",
    "omega",
    "conjugation_differential",
    "quotient_basis",
    "b_matrix",
    "canonical_measures",
    "SymplecticFourier",
    "orbit_trace",
]


class GridCoverageWarning(UserWarning):
    """A truncated grid misses more mass than the requested tolerance."""


class OrbitKind(enum.Enum):
    G_POINT = "G_point"
    G_GENERIC = "G_generic"
    GT_POINT = "Gt_point"
    GT_2D = "Gt_2d"
    GT_GENERIC = "Gt_generic"


# ---------------------------------------------------------------------------
# dressing actions
# ---------------------------------------------------------------------------

def _lie_split(X, n, tilde=True):
    X = np.asarray(X, dtype=float)
    a, b, c = X[:n], X[n:2 * n], X[2 * n]
    d = X[2 * n + 1] if tilde else 0.0
    return a, b, c, d


def dressing_g(params: ModelParams, h: GroupElement, mu: GroupElement) -> GroupElement:
    """Left dressing of ``H`` on ``G``: ``(p + eta b, q - eta a, r)``."""
    if h.kind is not Kind.H or mu.kind is not Kind.G:
        raise ValueError("dressing_g acts by an H element on a G element")
    eta = eta_lambda(params, mu.r)
    return GroupElement.from_parts(
        Kind.G, mu.n, p=mu.p + eta * h.y, q=mu.q - eta * h.x, r=mu.r
    )


def dressing_gt(params: ModelParams, h: GroupElement, mu: GroupElement) -> GroupElement:
    """Left dressing of ``Htilde`` on ``Gtilde``.

    ``(e^{-d} p + eta b, e^{d} q - eta a, r, s + e^{-d} p.a - e^{d} q.b + eta a.b)``
    for ``h = (a, b, c, d)``; ``r`` is copied, never recomputed.
    """
    if h.kind is not Kind.HTILDE or mu.kind is not Kind.GTILDE:
        raise ValueError("dressing_gt acts by an Htilde element on a Gtilde element")
    a, b, d = h.x, h.y, h.w
    p, q, r, s = mu.p, mu.q, mu.r, mu.s
    eta = eta_lambda(params, r)
    em, ep = np.exp(-d), np.exp(d)
    return GroupElement.from_parts(
        Kind.GTILDE, mu.n,
        p=em * p + eta * b,
        q=ep * q - eta * a,
        r=r,
        s=s + em * (p @ a) - ep * (q @ b) + eta * (a @ b),
    )


def dressing_via_double(params: ModelParams, h: GroupElement, mu: GroupElement) -> GroupElement:
    """Dressing computed in the double group.

    Factorize ``mu * h^{-1} = h' * mu'`` and return ``mu'``.  Accepts either
    an ``(Htilde, Gtilde)`` or an ``(H, G)`` pair.
    """
    prod = mul(params, embed(mu), embed(inverse(params, h)))
    return factorize(prod)[1]


def dressing_jacobian(params: ModelParams, mu: GroupElement) -> np.ndarray:
    """Matrix of ``X -> d(delta)(X)(mu)``; rows are ``[p.., q.., r(, s)]``."""
    n = mu.n
    eta = eta_lambda(params, mu.r)
    tilde = mu.kind is Kind.GTILDE
    rows = 2 * n + 1 + int(tilde)
    cols = 2 * n + 1 + int(tilde)
    J = np.zeros((rows, cols))
    I = np.eye(n)
    J[:n, n:2 * n] = eta * I          # dp = -d p + eta b
    J[n:2 * n, :n] = -eta * I         # dq =  d q - eta a
    if tilde:
        J[:n, 2 * n + 1] = -mu.p
        J[n:2 * n, 2 * n + 1] = mu.q
        J[2 * n + 1, :n] = mu.p       # ds = p.a - q.b
        J[2 * n + 1, n:2 * n] = -mu.q
    return J


def infinitesimal_dressing(params: ModelParams, X, mu: GroupElement) -> np.ndarray:
    """Tangent vector ``d/dt delta(tX)(mu)`` at ``t = 0``.

    For ``Gtilde``: ``(-d p + eta b, d q - eta a, 0, p.a - q.b)``.
    """
    return dressing_jacobian(params, mu) @ np.asarray(X, dtype=float)


def poisson_bracket(params: ModelParams, group: Kind, dphi, dpsi, mu: GroupElement) -> float:
    """Poisson bracket at ``mu`` of two functions with the given differentials.

    ``dphi = (x, y, z[, w])`` and ``dpsi = (x', y', z'[, w'])``.
    """
    n = mu.n
    tilde = group is Kind.GTILDE
    x, y, _, w = _lie_split(dphi, n, tilde)
    x2, y2, _, w2 = _lie_split(dpsi, n, tilde)
    eta = eta_lambda(params, mu.r)
    val = eta * (x @ y2 - x2 @ y)
    if tilde:
        val += mu.p @ (w * x2 - w2 * x) + mu.q @ (w2 * y - w * y2)
    return float(val)


def omega(params: ModelParams, mu: GroupElement, X, Y) -> float:
    """Symplectic form at ``mu`` evaluated on the classes of ``X, Y``."""
    n = mu.n
    tilde = mu.kind is Kind.GTILDE
    x, y, _, w = _lie_split(X, n, tilde)
    x2, y2, _, w2 = _lie_split(Y, n, tilde)
    p, q = mu.p, mu.q
    eta = eta_lambda(params, mu.r)
    return float(p @ (w * x2 - w2 * x) + q @ (w2 * y - w * y2) + eta * (x @ y2 - x2 @ y))


def conjugation_differential(h: GroupElement, X) -> np.ndarray:
    """Differential at the identity of ``x -> h x h^{-1}`` on ``Htilde``.

    ``(e^d x - w a, e^{-d} y + w b, z + e^{-d} a.y - e^d x.b + w a.b, w)``.
    """
    n = h.n
    a, b, d = h.x, h.y, h.w
    x, y, z, w = _lie_split(X, n, True)
    return np.concatenate([
        np.exp(d) * x - w * a,
        np.exp(-d) * y + w * b,
        [z + np.exp(-d) * (a @ y) - np.exp(d) * (x @ b) + w * (a @ b)],
        [w],
    ])


# ---------------------------------------------------------------------------
# orbits
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Orbit:
    """A classified dressing orbit.

    ``params`` holds the orbit invariants: ``(p, q)`` for a point of ``G``,
    ``(r,)`` for a generic ``G`` orbit, ``(s,)`` for a point of ``Gtilde``,
    the canonical pair ``(p, q)`` for a 2-dimensional orbit and ``(r, c)``
    with ``c = s + p.q / eta(r)`` for a generic ``Gtilde`` orbit.
    """

    kind: OrbitKind
    params: tuple
    base_point: GroupElement
    dim: int
    lam: float = field(default=0.0)

    @property
    def n(self):
        return self.base_point.n

    def same_as(self, other: "Orbit", rtol=1e-9, atol=1e-12) -> bool:
        """Equality of kinds (exact) and of invariants (up to roundoff)."""
        if self.kind != other.kind or self.n != other.n:
            return False
        a = np.concatenate([np.atleast_1d(np.asarray(v, float)) for v in self.params])
        b = np.concatenate([np.atleast_1d(np.asarray(v, float)) for v in other.params])
        return a.shape == b.shape and np.allclose(a, b, rtol=rtol, atol=atol)

    def dtheta_density(self) -> float:
        """Canonical orbit-measure density relative to the dual coordinates."""
        if self.dim == 0:
            return 1.0
        return canonical_measures(ModelParams(self.lam, self.n), self)[1]


def _is_zero(v, tol):
    v = np.asarray(v, dtype=float)
    return bool(np.all(np.abs(v) <= tol))


def _canonical_pair(p, q, tol=0.0):
    np_, nq = np.linalg.norm(p), np.linalg.norm(q)
    if np_ > tol and nq > tol:
        alpha = np.sqrt(nq / np_)
        return alpha * p, q / alpha
    if np_ > tol:
        return p / np_, q * 0.0
    return p * 0.0, q / nq


def classify_orbit(params: ModelParams, mu: GroupElement, tol: float = 0.0) -> Orbit:
    """Classify the dressing orbit through ``mu``.

    Zero tests are exact unless ``tol > 0`` is given.
    """
    n = mu.n
    lam = float(params.lam)
    if mu.kind is Kind.G:
        if abs(mu.r) <= tol:
            base = GroupElement.from_parts(Kind.G, n, p=mu.p, q=mu.q)
            return Orbit(OrbitKind.G_POINT, (mu.p, mu.q), base, 0, lam)
        base = GroupElement.from_parts(Kind.G, n, r=mu.r)
        return Orbit(OrbitKind.G_GENERIC, (mu.r,), base, 2 * n, lam)
    if mu.kind is not Kind.GTILDE:
        raise ValueError(f"orbits live in G or Gtilde, got {mu.kind.value}")
    p, q, r, s = mu.p, mu.q, mu.r, mu.s
    if abs(r) > tol:
        c = s + (p @ q) / eta_lambda(params, r)
        base = GroupElement.from_parts(Kind.GTILDE, n, r=r, s=c)
        return Orbit(OrbitKind.GT_GENERIC, (r, c), base, 2 * n, lam)
    if _is_zero(p, tol) and _is_zero(q, tol):
        base = GroupElement.from_parts(Kind.GTILDE, n, s=s)
        return Orbit(OrbitKind.GT_POINT, (s,), base, 0, lam)
    pc, qc = _canonical_pair(p, q, tol)
    base = GroupElement.from_parts(Kind.GTILDE, n, p=pc, q=qc)
    return Orbit(OrbitKind.GT_2D, (pc, qc), base, 2, lam)


def stabilizer_basis(params: ModelParams, mu: GroupElement) -> list[np.ndarray]:
    """Basis of the stabilizer subalgebra at ``mu``.

    Solves ``d p = eta b, d q = eta a, p.a - q.b = 0`` case by case, so
    that the dimension count is exact.
    """
    n = mu.n
    tilde = mu.kind is Kind.GTILDE
    dim = 2 * n + 1 + int(tilde)
    eye = np.eye(dim)
    r = mu.r
    if r != 0.0:
        eta = eta_lambda(params, r)
        basis = [eye[2 * n]]
        if tilde:
            # (q, p, 0, eta) rather than (q/eta, p/eta, 0, 1): same line, no overflow as r -> 0
            v = np.concatenate([mu.q, mu.p, [0.0, eta]])
            basis.append(v / np.linalg.norm(v))
        return basis
    if not tilde or (_is_zero(mu.p, 0.0) and _is_zero(mu.q, 0.0)):
        return [eye[i] for i in range(dim)]
    # r = 0, (p, q) != 0: d = 0, c free, (a, b) orthogonal to (p, -q)
    ab = null_space(np.concatenate([mu.p, -mu.q])[None, :])
    basis = [np.concatenate([col, [0.0, 0.0]]) for col in ab.T]
    basis.append(eye[2 * n])
    return basis


def quotient_basis(params: ModelParams, mu: GroupElement) -> list[int]:
    """Coordinate directions spanning a complement of the stabilizer.

    Returned as indices into the Lie-vector layout.
    """
    n = mu.n
    tilde = mu.kind is Kind.GTILDE
    if mu.r != 0.0:
        return list(range(2 * n))
    if not tilde or (_is_zero(mu.p, 0.0) and _is_zero(mu.q, 0.0)):
        return []
    v = np.concatenate([mu.p, -mu.q])
    k = int(np.argmax(np.abs(v)))
    return [2 * n + 1, k]


def _unit(i, dim):
    e = np.zeros(dim)
    e[i] = 1.0
    return e


def b_matrix(params: ModelParams, orbit: Orbit, mu: GroupElement | None = None) -> np.ndarray:
    """Matrix of the symplectic form on the coordinate complement of the stabilizer."""
    if orbit.dim == 0:
        raise ValueError("point orbits carry no symplectic form")
    mu = orbit.base_point if mu is None else mu
    idx = quotient_basis(params, mu)
    dim = 2 * mu.n + 1 + int(mu.kind is Kind.GTILDE)
    B = np.array([[omega(params, mu, _unit(i, dim), _unit(j, dim)) for j in idx] for i in idx])
    if np.linalg.matrix_rank(B) < len(idx):
        raise ArithmeticError("degenerate form on a positive-dimensional orbit")
    return B


def canonical_measures(params: ModelParams, orbit: Orbit, mu=None) -> tuple[float, float]:
    """Densities ``(dm, dtheta)`` relative to Lebesgue measure.

    ``dm = |det B|^{1/2} dv`` on the quotient, ``dtheta = |det B|^{-1/2} dl``
    on the orbit; their product is one.
    """
    det = abs(float(np.linalg.det(b_matrix(params, orbit, mu))))
    if det == 0.0:
        raise ZeroDivisionError("zero determinant")
    return det ** 0.5, det ** -0.5


# ---------------------------------------------------------------------------
# symplectic Fourier transform
# ---------------------------------------------------------------------------

class SymplecticFourier:
    """Fourier transform between the quotient ``V`` and the orbit.

    Coordinates on ``V`` are those of :func:`quotient_basis`; the orbit side
    is parametrized by the dual coordinates ``xi_i = <l, e_i>``.  Forward:
    ``F f(xi) = int f(v) e^{-2 pi i xi.v} dm(v)``; inverse uses ``e^{+2 pi i}``
    and ``dtheta``.
    """

    def __init__(self, params: ModelParams, orbit: Orbit, mu=None):
        self.params = params
        self.orbit = orbit
        self.dm, self.dtheta = canonical_measures(params, orbit, mu)
        self.k = orbit.dim

    # analytic route ---------------------------------------------------------
    def forward_gaussian(self, f):
        """Transform a :class:`~heisenberg_orbits.gaussian.GaussianSum` on ``V``."""
        return f.fourier(range(self.k), sign=-1).scale(self.dm)

    def inverse_gaussian(self, F):
        return F.fourier(range(self.k), sign=+1).scale(self.dtheta)

    # grid route -------------------------------------------------------------
    @staticmethod
    def _matrix(nodes_out, nodes_in, weights_in, sign):
        return np.exp(sign * 2j * np.pi * np.outer(nodes_out, nodes_in)) * weights_in[None, :]

    def _apply(self, values, nodes, weights, out_nodes, sign, density, tol):
        values = np.asarray(values, dtype=complex)
        if values.shape != (len(nodes),) * self.k:
            raise ValueError("grid samples must be a k-dimensional tensor over the nodes")
        edge = _edge_mass(values)
        if edge > tol:
            warnings.warn(
                f"samples carry relative edge mass {edge:.2e} > {tol:.0e}; "
                "enlarge the box", GridCoverageWarning, stacklevel=3,
            )
        M = self._matrix(out_nodes, nodes, weights, sign)
        out = values
        for axis in range(self.k):
            out = np.moveaxis(np.tensordot(M, out, axes=([1], [axis])), 0, axis)
        return out * density

    def forward_grid(self, values, nodes, weights, out_nodes=None, tol=1e-12):
        out_nodes = nodes if out_nodes is None else out_nodes
        return self._apply(values, nodes, weights, out_nodes, -1, self.dm, tol)

    def inverse_grid(self, values, nodes, weights, out_nodes=None, tol=1e-12):
        out_nodes = nodes if out_nodes is None else out_nodes
        return self._apply(values, nodes, weights, out_nodes, +1, self.dtheta, tol)

    def l2_v(self, values, weights):
        return _tensor_l2(values, weights) * self.dm

    def l2_orbit(self, values, weights):
        return _tensor_l2(values, weights) * self.dtheta


def _tensor_l2(values, weights):
    out = np.abs(np.asarray(values)) ** 2
    for _ in range(out.ndim):
        out = np.tensordot(out, weights, axes=([0], [0]))
    return float(np.real(out))


def _edge_mass(values):
    a = np.abs(values)
    peak = a.max() if a.size else 0.0
    if peak == 0.0:
        return 0.0
    edge = 0.0
    for axis in range(a.ndim):
        edge = max(edge, np.take(a, 0, axis).max(), np.take(a, -1, axis).max())
    return edge / peak


# ---------------------------------------------------------------------------
# orbit traces
# ---------------------------------------------------------------------------

def orbit_trace(params: ModelParams, mu: GroupElement, n_points: int = 65, span: float = 3.0):
    """Sample points of the orbit through ``mu`` on the ``r = s = 0`` plane.

    Two-dimensional orbits are traced by ``(alpha p, q / alpha)`` for
    ``log alpha`` uniform in ``[-span, span]``; point orbits give one row.
    Returns an ``(m, 2n)`` array of ``(p, q)`` rows.
    """
    orb = classify_orbit(params, mu)
    if orb.kind in (OrbitKind.GT_POINT, OrbitKind.G_POINT):
        b = orb.base_point
        return np.concatenate([b.p, b.q])[None, :]
    if orb.kind is not OrbitKind.GT_2D:
        raise ValueError("traces are drawn for orbits on the r = 0 plane")
    alpha = np.exp(np.linspace(-span, span, n_points))
    return np.hstack([np.outer(alpha, mu.p), np.outer(1.0 / alpha, mu.q)])
