"""Analytic test functions for the function algebras.

Elements of the algebra on ``(x, y, r)`` are stored slice by slice: for each
``r`` the function is a :class:`~heisenberg_orbits.gaussian.GaussianSum` in
``z = (x, y)``.  Basic elements are Gaussians times a smooth bump in ``r``;
products and involutions are further slices computed lazily in closed form.

Elements of the algebra on ``(x, y, r, w)`` are finite sums of separable
terms ``Gaussian(x, y) * bump(r) * bump(w)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .gaussian import GaussianSum

__all__ = [
    "Bump",
    "SchwartzFunction",
    "TildeTerm",
    "TildeSchwartzFunction",
    "random_gaussian_sum",
    "legendre_nodes",
]


@dataclass(frozen=True)
class Bump:
    """``exp(1 - 1/(1 - t^2))`` with ``t = (r - center)/halfwidth``; equals 1 at the center."""

    center: float = 0.0
    halfwidth: float = 1.0

    @property
    def support(self) -> tuple[float, float]:
        return (self.center - self.halfwidth, self.center + self.halfwidth)

    def __call__(self, r):
        t = (np.asarray(r, dtype=float) - self.center) / self.halfwidth
        inside = np.abs(t) < 1.0
        out = np.zeros_like(t)
        ti = t[inside]
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - ti * ti))
        return out if out.ndim else float(out)


def legendre_nodes(lo: float, hi: float, m: int):
    """Gauss-Legendre nodes and weights on ``[lo, hi]``."""
    t, w = np.polynomial.legendre.leggauss(m)
    half = 0.5 * (hi - lo)
    return lo + half * (t + 1.0), half * w


class SchwartzFunction:
    """Function of ``(x, y, r)`` with Gaussian slices and compact ``r``-support.

    Parameters
    ----------
    n : int
        Dimension of ``x`` and ``y``.
    slice_fn : callable
        ``r -> GaussianSum`` on ``R^{2n}``; only called inside the support.
    support : (float, float)
        Open interval outside of which the function vanishes identically.
    """

    def __init__(self, n: int, slice_fn: Callable[[float], GaussianSum],
                 support: tuple[float, float], label: str = ""):
        self.n = int(n)
        self._slice_fn = slice_fn
        self.support = (float(support[0]), float(support[1]))
        self.label = label
        self._cache: dict[float, GaussianSum] = {}

    # construction -----------------------------------------------------------
    @classmethod
    def from_terms(cls, n: int, terms: list[tuple[GaussianSum, Bump]], label="") -> "SchwartzFunction":
        if not terms:
            return cls.zero(n)
        for g, _ in terms:
            if g.k != 2 * n:
                raise ValueError("slices must live on R^{2n}")
        lo = min(b.support[0] for _, b in terms)
        hi = max(b.support[1] for _, b in terms)

        def slice_fn(r):
            out = GaussianSum.zeros(2 * n)
            for g, bump in terms:
                c = bump(r)
                if c != 0.0:
                    out = out + g.scale(c)
            return out

        return cls(n, slice_fn, (lo, hi), label)

    @classmethod
    def gaussian(cls, n: int = 1, A=None, b=None, weight=1.0, bump: Bump | None = None,
                 label="gaussian") -> "SchwartzFunction":
        """``weight * exp(-z^T A z + b.z) * bump(r)``; defaults to ``exp(-pi |z|^2)``."""
        A = np.pi * np.eye(2 * n) if A is None else A
        bump = Bump(1.0, 0.5) if bump is None else bump
        return cls.from_terms(n, [(GaussianSum.single(A, b, weight), bump)], label)

    @classmethod
    def zero(cls, n: int = 1) -> "SchwartzFunction":
        return cls(n, lambda r: GaussianSum.zeros(2 * n), (0.0, 0.0), "zero")

    # access -----------------------------------------------------------------
    def in_support(self, r: float) -> bool:
        return self.support[0] < r < self.support[1]

    def slice(self, r: float) -> GaussianSum:
        r = float(r)
        if not self.in_support(r):
            return GaussianSum.zeros(2 * self.n)
        if r not in self._cache:
            if len(self._cache) > 512:
                self._cache.clear()
            self._cache[r] = self._slice_fn(r)
        return self._cache[r]

    def __call__(self, x, y, r) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        y = np.atleast_1d(np.asarray(y, dtype=float))
        z = np.concatenate([x.reshape(-1, self.n), y.reshape(-1, self.n)], axis=1)
        r = np.broadcast_to(np.asarray(r, dtype=float), (z.shape[0],))
        return np.array([self.slice(ri)(zi) for zi, ri in zip(z, r)])

    def nterms(self, r: float) -> int:
        return self.slice(r).nterms

    # linear structure -------------------------------------------------------
    def __add__(self, other: "SchwartzFunction") -> "SchwartzFunction":
        lo = min(self.support[0], other.support[0])
        hi = max(self.support[1], other.support[1])
        return SchwartzFunction(self.n, lambda r: self.slice(r) + other.slice(r), (lo, hi),
                                f"({self.label}+{other.label})")

    def scale(self, c) -> "SchwartzFunction":
        return SchwartzFunction(self.n, lambda r: self.slice(r).scale(c), self.support, self.label)

    def l2_slice_sq(self, r: float) -> float:
        """``int |f(x, y, r)|^2 dx dy`` in closed form."""
        return self.slice(r).l2_norm_sq()

    def __repr__(self):
        return f"SchwartzFunction(n={self.n}, support={self.support}, {self.label})"


def random_gaussian_sum(rng: np.random.Generator, k: int, nterms: int = 1,
                        width=(0.6, 1.6), chirp: float = 0.3, shift: float = 0.4) -> GaussianSum:
    """Random Gaussian sum whose terms stay resolvable on the default grids.

    Real parts of the quadratic forms have eigenvalues in ``pi * width``;
    imaginary parts (chirps) and linear terms are bounded by ``chirp`` and
    ``shift``.
    """
    out = GaussianSum.zeros(k)
    for _ in range(nterms):
        Qm, _ = np.linalg.qr(rng.standard_normal((k, k)))
        ev = np.pi * rng.uniform(*width, size=k)
        re = Qm @ np.diag(ev) @ Qm.T
        im = rng.uniform(-chirp, chirp, (k, k))
        im = 0.5 * (im + im.T)
        b = rng.uniform(-shift, shift, k) + 1j * rng.uniform(-shift, shift, k)
        w = rng.uniform(0.5, 1.5) * np.exp(2j * np.pi * rng.uniform())
        out = out + GaussianSum.single(re + 1j * im, b, w)
    return out


# ---------------------------------------------------------------------------
# functions of (x, y, r, w)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TildeTerm:
    gauss: GaussianSum  # in (x, y)
    rbump: Bump
    wbump: Bump


class TildeSchwartzFunction:
    """Finite sum of separable terms ``G(x, y) * rbump(r) * wbump(w)``."""

    def __init__(self, n: int, terms: list[TildeTerm], label: str = ""):
        self.n = int(n)
        for t in terms:
            if t.gauss.k != 2 * n:
                raise ValueError("Gaussian factors must live on R^{2n}")
        self.terms = list(terms)
        self.label = label

    @classmethod
    def gaussian(cls, n: int = 1, A=None, b=None, weight=1.0, rbump: Bump | None = None,
                 wbump: Bump | None = None, label="gaussian") -> "TildeSchwartzFunction":
        A = np.pi * np.eye(2 * n) if A is None else A
        rbump = Bump(0.0, 1.0) if rbump is None else rbump
        wbump = Bump(0.0, 1.0) if wbump is None else wbump
        return cls(n, [TildeTerm(GaussianSum.single(A, b, weight), rbump, wbump)], label)

    @classmethod
    def zero(cls, n: int = 1) -> "TildeSchwartzFunction":
        return cls(n, [], "zero")

    def __add__(self, other):
        return TildeSchwartzFunction(self.n, self.terms + other.terms)

    def scale(self, c):
        return TildeSchwartzFunction(
            self.n, [TildeTerm(t.gauss.scale(c), t.rbump, t.wbump) for t in self.terms], self.label
        )

    def __call__(self, x, y, r, w):
        z = np.concatenate([np.atleast_1d(x), np.atleast_1d(y)]).astype(float)
        return sum(complex(t.gauss(z)) * t.rbump(r) * t.wbump(w) for t in self.terms)

    @property
    def w_support(self) -> tuple[float, float]:
        if not self.terms:
            return (0.0, 0.0)
        return (min(t.wbump.support[0] for t in self.terms),
                max(t.wbump.support[1] for t in self.terms))
