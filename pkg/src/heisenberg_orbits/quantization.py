"""Twisted product, quantization maps, orbit products and Plancherel checks.

Conventions used throughout (``eta = eta_lambda(r)``, ``e(t) = exp(2 pi i t)``):

* twisted product
  ``(f x g)(X, Y, r) = int f(x, y, r) g(X - x, Y - y, r) e(-eta x.(Y - y)) dx dy``
* involution ``f*(x, y, r) = conj f(-x, -y, r) e(-eta x.y)``

Both are fixed by asking ``pi_r(f x g) = pi_r(f) pi_r(g)`` and
``pi_r(f*) = pi_r(f)^*`` for the kernel ``K(u, v) = F_y f(v - u, eta u)``;
the test-suite checks them against grid operators.

On a generic orbit a function ``phi(alpha, beta)`` is quantized by the kernel
``K(u, v) = int phi(pt, eta u) e(pt.(v - u)) dpt``.  Scaling the orbit form
by ``hbar`` replaces ``eta`` by ``hbar * eta`` in the product and the
involution; the Lebesgue measure in the oscillatory integrals is self-dual
for every ``hbar``, so no extra normalization appears.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .functions import SchwartzFunction, legendre_nodes
from .gaussian import GaussianSum
from .grid import GridOperator, GridSpec
from .groups import ModelParams, eta_lambda
from .kernels import gaussian_sum_grid
from .orbits import Orbit, OrbitKind
from .representations import hs_closed_form, partial_fourier, pi_r

LOGGER = logging.getLogger(__name__)

__all__ = [
    "TermOverflowError",
    "MAX_TERMS",
    "twisted_slice",
    "twisted_multiply",
    "involution_slice",
    "involution",
    "regular_rep",
    "OrbitFunction",
    "restrict_to_orbit",
    "q_map",
    "moyal_product",
    "moyal_involution",
    "PlancherelMeasure",
    "PlancherelResult",
    "plancherel_check",
    "intertwining_check",
]

MAX_TERMS = 4096


class TermOverflowError(ArithmeticError):
    """A closed-form product would exceed the configured term cap."""


def _pair_block(n, i0, j0, coef):
    """Symmetric ``Q`` on ``R^{k}`` with ``z^T Q z = 2 coef sum_i z[i0+i] z[j0+i]``."""
    def build(k):
        Q = np.zeros((k, k), dtype=complex)
        for i in range(n):
            Q[i0 + i, j0 + i] += coef
            Q[j0 + i, i0 + i] += coef
        return Q
    return build


# ---------------------------------------------------------------------------
# the algebra on (x, y, r)
# ---------------------------------------------------------------------------

def twisted_slice(F: GaussianSum, G: GaussianSum, eta: float, n: int,
                  max_terms: int = MAX_TERMS) -> GaussianSum:
    """Twisted convolution of two slices; ``eta = 0`` gives ordinary convolution."""
    if F.nterms * G.nterms > max_terms:
        raise TermOverflowError(
            f"product has {F.nterms * G.nterms} terms, cap is {max_terms}")
    if F.nterms == 0 or G.nterms == 0:
        return GaussianSum.zeros(2 * n)
    k = 4 * n  # joint coordinates (X, Y, x, y)
    I = np.eye(2 * n)
    Mf = np.hstack([np.zeros((2 * n, 2 * n)), I])
    Mg = np.hstack([I, -I])
    joint = F.pullback(Mf) * G.pullback(Mg)
    if eta != 0.0:
        # e(-eta x.(Y - y)) = exp(-z^T Q z) with z^T Q z = 2 pi i eta (x.Y - x.y)
        Q = _pair_block(n, 2 * n, n, np.pi * 1j * eta)(k)
        Q += _pair_block(n, 2 * n, 3 * n, -np.pi * 1j * eta)(k)
        joint = joint.times_quadratic(Q)
    return joint.integrate(range(2 * n, 4 * n))


def twisted_multiply(params: ModelParams, f: SchwartzFunction, g: SchwartzFunction,
                     classical: bool = False, max_terms: int = MAX_TERMS) -> SchwartzFunction:
    """Twisted product ``f x g``; ``classical=True`` drops the cocycle."""
    if f.n != g.n or f.n != params.n:
        raise ValueError("dimension mismatch")
    lo, hi = max(f.support[0], g.support[0]), min(f.support[1], g.support[1])
    if lo >= hi:
        return SchwartzFunction.zero(params.n)

    def slice_fn(r):
        eta = 0.0 if classical else float(eta_lambda(params, r))
        return twisted_slice(f.slice(r), g.slice(r), eta, params.n, max_terms)

    return SchwartzFunction(params.n, slice_fn, (lo, hi), f"({f.label}x{g.label})")


def involution_slice(F: GaussianSum, eta: float, n: int) -> GaussianSum:
    out = F.conj().pullback(-np.eye(2 * n))
    if eta != 0.0:
        return out.times_quadratic(_pair_block(n, 0, n, np.pi * 1j * eta)(2 * n))
    return out


def involution(params: ModelParams, f: SchwartzFunction) -> SchwartzFunction:
    """``f*(x, y, r) = conj f(-x, -y, r) e(-eta x.y)``."""
    return SchwartzFunction(
        params.n, lambda r: involution_slice(f.slice(r), float(eta_lambda(params, r)), params.n),
        f.support, f"{f.label}*")


def regular_rep(params: ModelParams, f: SchwartzFunction, xi: SchwartzFunction,
                **kw) -> SchwartzFunction:
    """Left regular representation ``L(f) xi = f x xi``."""
    return twisted_multiply(params, f, xi, **kw)


# ---------------------------------------------------------------------------
# functions on orbits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrbitFunction:
    """Function on a dressing orbit of ``G``.

    On a generic orbit ``O_r`` it is a Gaussian sum in ``(alpha, beta)``;
    on a point orbit it is a single complex number.
    """

    orbit: Orbit
    gauss: GaussianSum | None = None
    value: complex | None = None

    def __post_init__(self):
        if self.orbit.kind is OrbitKind.G_GENERIC:
            if self.gauss is None or self.gauss.k != 2 * self.orbit.n:
                raise ValueError("generic orbit functions need a Gaussian sum on R^{2n}")
        elif self.orbit.kind is OrbitKind.G_POINT:
            if self.value is None:
                raise ValueError("point orbit functions need a value")
        else:
            raise ValueError(f"unsupported orbit kind {self.orbit.kind.value}")

    @property
    def is_point(self) -> bool:
        return self.orbit.kind is OrbitKind.G_POINT

    @property
    def r(self) -> float:
        return 0.0 if self.is_point else float(self.orbit.params[0])

    @property
    def eta(self) -> float:
        return float(eta_lambda(ModelParams(self.orbit.lam, self.orbit.n), self.r))

    def __call__(self, alpha, beta):
        if self.is_point:
            return self.value
        z = np.concatenate([np.atleast_1d(alpha), np.atleast_1d(beta)]).astype(float)
        return complex(self.gauss(z))

    def l2_norm_sq(self) -> float:
        """Norm against the canonical orbit measure."""
        if self.is_point:
            return abs(self.value) ** 2
        return self.gauss.l2_norm_sq() * self.orbit.dtheta_density()

    def with_gauss(self, g: GaussianSum) -> "OrbitFunction":
        return OrbitFunction(self.orbit, gauss=g)

    def with_value(self, v) -> "OrbitFunction":
        return OrbitFunction(self.orbit, value=complex(v))


def _same_orbit(a: OrbitFunction, b: OrbitFunction):
    if not a.orbit.same_as(b.orbit) or a.orbit.lam != b.orbit.lam:
        raise ValueError("orbit functions live on different orbits")


def restrict_to_orbit(params: ModelParams, f: SchwartzFunction, orbit: Orbit) -> OrbitFunction:
    """``fhat`` restricted to ``orbit``."""
    fh = partial_fourier(f)
    if orbit.kind is OrbitKind.G_POINT:
        p, q = orbit.params
        return OrbitFunction(orbit, value=fh(p, q, 0.0))
    if orbit.kind is not OrbitKind.G_GENERIC:
        raise ValueError("orbits of G only")
    return OrbitFunction(orbit, gauss=fh.slice(orbit.params[0]))


def q_map_kernel(phi: OrbitFunction, hbar: float = 1.0) -> GaussianSum:
    """Kernel ``K(u, v) = int phi(pt, eta u) e(pt.(v - u)) dpt`` as a Gaussian sum."""
    n = phi.orbit.n
    eta = hbar * phi.eta
    fp = phi.gauss.fourier(range(n), sign=+1)  # coordinates (x, beta)
    I, Z = np.eye(n), np.zeros((n, n))
    return fp.pullback(np.block([[-I, I], [eta * I, Z]]))


def q_map(phi: OrbitFunction, grid: GridSpec | None = None, hbar: float = 1.0, backend=None):
    """Quantization map: grid operator on a generic orbit, scalar on a point orbit."""
    if phi.is_point:
        return complex(phi.value)
    if grid is None:
        raise ValueError("a grid is needed on generic orbits")
    if grid.n != phi.orbit.n:
        raise ValueError("grid dimension mismatch")
    K = gaussian_sum_grid(q_map_kernel(phi, hbar), grid.nodes, grid.nodes, backend=backend)
    return GridOperator.on(K, grid)


def moyal_product(phi: OrbitFunction, psi: OrbitFunction, hbar: float = 1.0,
                  max_terms: int = MAX_TERMS) -> OrbitFunction:
    """Deformed product on an orbit of ``G``.

    ``(phi x psi)(a, b) = int phi(pt, b) psi(a, b + hbar eta xt) e((pt - a).xt) dpt dxt``.
    """
    _same_orbit(phi, psi)
    if phi.is_point:
        return phi.with_value(phi.value * psi.value)
    if not 0.0 < hbar <= 1.0:
        raise ValueError("hbar must lie in (0, 1]")
    F, G = phi.gauss, psi.gauss
    if F.nterms * G.nterms > max_terms:
        raise TermOverflowError("orbit product exceeds the term cap")
    n = phi.orbit.n
    eta = hbar * phi.eta
    if eta == 0.0:
        raise ValueError("the orbit product needs eta != 0")
    if F.nterms == 0 or G.nterms == 0:
        return phi.with_gauss(GaussianSum.zeros(2 * n))
    I, Z = np.eye(n), np.zeros((n, n))
    # joint coordinates (a, b, pt, xt)
    Mf = np.block([[Z, Z, I, Z], [Z, I, Z, Z]])
    Mg = np.block([[I, Z, Z, Z], [Z, I, Z, eta * I]])
    joint = F.pullback(Mf) * G.pullback(Mg)
    # e((pt - a).xt) = exp(-z^T Q z) with z^T Q z = -2 pi i (pt.xt - a.xt)
    k = 4 * n
    Q = _pair_block(n, 2 * n, 3 * n, -np.pi * 1j)(k) + _pair_block(n, 0, 3 * n, np.pi * 1j)(k)
    out = joint.times_quadratic(Q).integrate(range(2 * n, 4 * n))
    return phi.with_gauss(out)


def moyal_involution(psi: OrbitFunction, hbar: float = 1.0) -> OrbitFunction:
    """``psi*(a, b) = int conj psi(pt, qt) e((pt - a).x + (qt - b).y) e(-hbar eta x.y)``."""
    if psi.is_point:
        return psi.with_value(np.conj(psi.value))
    n = psi.orbit.n
    eta = hbar * psi.eta
    # integrate (pt, qt): the Fourier transform with e(+) lands on (x, y)
    H = psi.gauss.conj().fourier(range(2 * n), sign=+1)
    # joint (a, b, x, y); e(-a.x - b.y - eta x.y)
    joint = H.pullback(np.hstack([np.zeros((2 * n, 2 * n)), np.eye(2 * n)]))
    k = 4 * n
    Q = (_pair_block(n, 0, 2 * n, np.pi * 1j)(k) + _pair_block(n, n, 3 * n, np.pi * 1j)(k)
         + _pair_block(n, 2 * n, 3 * n, np.pi * 1j * eta)(k))
    return psi.with_gauss(joint.times_quadratic(Q).integrate(range(2 * n, 4 * n)))


# ---------------------------------------------------------------------------
# Plancherel
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PlancherelMeasure:
    """``|eta(r)|^n dr`` with Gauss-Legendre nodes on ``[lo, hi]``."""

    params: ModelParams
    lo: float
    hi: float
    m: int = 32

    def density(self, r):
        return np.abs(eta_lambda(self.params, np.asarray(r, float))) ** self.params.n

    @property
    def nodes(self):
        return legendre_nodes(self.lo, self.hi, self.m)[0]

    @property
    def weights(self):
        r, w = legendre_nodes(self.lo, self.hi, self.m)
        return w * self.density(r)


@dataclass(frozen=True)
class PlancherelResult:
    lhs: float
    rhs_closed: float
    rhs_grid: float | None

    @property
    def closed_residual(self) -> float:
        return abs(self.rhs_closed - self.lhs) / self.lhs if self.lhs else abs(self.rhs_closed)

    @property
    def grid_residual(self) -> float | None:
        if self.rhs_grid is None:
            return None
        return abs(self.rhs_grid - self.lhs) / self.lhs if self.lhs else abs(self.rhs_grid)


def plancherel_check(params: ModelParams, f: SchwartzFunction, m: int = 32,
                     grid: GridSpec | None = None) -> PlancherelResult:
    """Compare ``||f||_2^2`` with ``int ||pi_r(f)||_HS^2 |eta(r)|^n dr``.

    The left side integrates the closed-form slice norms with adaptive
    quadrature; the right side uses ``m`` Gauss-Legendre nodes in ``r`` with
    the orbit-norm closed form and, if ``grid`` is given, grid HS norms.
    """
    lo, hi = f.support
    if lo >= hi:
        return PlancherelResult(0.0, 0.0, 0.0 if grid is not None else None)
    lhs, _ = integrate.quad(f.l2_slice_sq, lo, hi, epsabs=0.0, epsrel=1e-13, limit=200)
    meas = PlancherelMeasure(params, lo, hi, m)
    rs, ws = meas.nodes, meas.weights
    # r = 0 carries zero Plancherel weight; skip it
    closed = sum(w * hs_closed_form(params, f, r) for r, w in zip(rs, ws) if r != 0.0)
    grid_val = None
    if grid is not None:
        grid_val = sum(w * pi_r(params, f, r, grid, check_coverage=False).hs_norm_sq()
                       for r, w in zip(rs, ws) if r != 0.0 and f.in_support(r))
    return PlancherelResult(float(lhs), float(closed), None if grid_val is None else float(grid_val))


def intertwining_check(params: ModelParams, f: SchwartzFunction, xi: SchwartzFunction,
                       r_samples, grid: GridSpec) -> float:
    """Max relative HS residual of ``pi_r(f x xi) - pi_r(f) pi_r(xi)`` over ``r_samples``."""
    prod = regular_rep(params, f, xi)
    worst = 0.0
    for r in r_samples:
        lhs = pi_r(params, prod, r, grid, check_coverage=False)
        rhs = pi_r(params, f, r, grid, check_coverage=False) @ pi_r(params, xi, r, grid,
                                                                    check_coverage=False)
        ref = rhs.hs_norm()
        res = (lhs - rhs).hs_norm()
        worst = max(worst, res / ref if ref > 0 else res)
    return worst
