"""Quadrature grids and discretized integral operators."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = ["GridSpec", "GridOperator"]

RULES = ("trapezoid", "gauss-hermite", "periodic")


@dataclass(frozen=True)
class GridSpec:
    """Tensor grid on ``[-extent, extent]^n``.

    ``rule`` is one of ``trapezoid`` (closed uniform grid, half weights at the
    ends), ``periodic`` (``points`` uniform nodes of one period, equal weights)
    or ``gauss-hermite`` (Hermite nodes rescaled to the box, weights
    corrected for the Gaussian weight function).
    """

    extent: float = 6.0
    points: int = 128
    rule: str = "trapezoid"
    n: int = 1

    def __post_init__(self):
        if self.points < 8:
            raise ValueError("a grid needs at least 8 points")
        if self.extent <= 0:
            raise ValueError("extent must be positive")
        if self.rule not in RULES:
            raise ValueError(f"unknown quadrature rule {self.rule!r}")

    def nodes_1d(self):
        L, N = float(self.extent), int(self.points)
        if self.rule == "trapezoid":
            x = np.linspace(-L, L, N)
            w = np.full(N, x[1] - x[0])
            w[0] = w[-1] = 0.5 * w[0]
        elif self.rule == "periodic":
            h = 2 * L / N
            x = -L + h * np.arange(N)
            w = np.full(N, h)
        else:
            t, wt = np.polynomial.hermite.hermgauss(N)
            scale = L / np.max(np.abs(t))
            x = t * scale
            w = wt * np.exp(t ** 2) * scale
        return x, w

    @cached_property
    def _tensor(self):
        x, w = self.nodes_1d()
        if self.n == 1:
            return x[:, None], w
        mesh = np.meshgrid(*([x] * self.n), indexing="ij")
        nodes = np.stack([m.reshape(-1) for m in mesh], axis=-1)
        wm = np.meshgrid(*([w] * self.n), indexing="ij")
        weights = np.prod(np.stack([m.reshape(-1) for m in wm]), axis=0)
        return nodes, weights

    @property
    def nodes(self) -> np.ndarray:
        """Node coordinates, shape ``(points**n, n)``."""
        return self._tensor[0]

    @property
    def weights(self) -> np.ndarray:
        return self._tensor[1]

    def refined(self, factor: int = 2) -> "GridSpec":
        """Grid with ``factor`` times the points and the extent."""
        return GridSpec(self.extent * factor, self.points * factor, self.rule, self.n)

    def ladder(self, steps: int = 4) -> list["GridSpec"]:
        """Coarse-to-fine grids ending at ``self``.

        Each step doubles the points and grows the extent by ``sqrt(2)``, so
        the spacing shrinks while the box widens.  Doubling both would keep
        the spacing fixed and stall the discretization error.
        """
        out = []
        for k in range(steps, -1, -1):
            pts = self.points // 2 ** k
            if pts < 8 or pts * 2 ** k != self.points:
                continue
            out.append(GridSpec(self.extent / 2 ** (k / 2), pts, self.rule, self.n))
        return out


class GridOperator:
    """Integral operator ``(K xi)(u_i) = sum_j K[i, j] w_j xi(u_j)``.

    Row and column grids may differ (``col_nodes``/``col_weights``); the
    kernel is stored as a read-only array.
    """

    def __init__(self, kernel, nodes, weights, grid: GridSpec | None = None,
                 col_nodes=None, col_weights=None):
        K = np.array(kernel, dtype=complex)
        self.nodes = np.asarray(nodes, dtype=float)
        self.weights = np.asarray(weights, dtype=float)
        self.col_nodes = self.nodes if col_nodes is None else np.asarray(col_nodes, float)
        self.col_weights = self.weights if col_weights is None else np.asarray(col_weights, float)
        if K.shape != (len(self.weights), len(self.col_weights)):
            raise ValueError(f"kernel shape {K.shape} does not match the grid")
        K.setflags(write=False)
        self.kernel = K
        self.grid = grid

    @classmethod
    def on(cls, kernel, grid: GridSpec) -> "GridOperator":
        return cls(kernel, grid.nodes, grid.weights, grid)

    def _like(self, kernel, nodes=None, weights=None, col_nodes=None, col_weights=None):
        return GridOperator(
            kernel,
            self.nodes if nodes is None else nodes,
            self.weights if weights is None else weights,
            self.grid,
            self.col_nodes if col_nodes is None else col_nodes,
            self.col_weights if col_weights is None else col_weights,
        )

    @property
    def shape(self):
        return self.kernel.shape

    def compose(self, other: "GridOperator") -> "GridOperator":
        if not np.array_equal(self.col_weights, other.weights):
            raise ValueError("inner grids differ")
        K = (self.kernel * self.col_weights[None, :]) @ other.kernel
        return self._like(K, col_nodes=other.col_nodes, col_weights=other.col_weights)

    def __matmul__(self, other):
        if isinstance(other, GridOperator):
            return self.compose(other)
        return self.apply(other)

    def apply(self, values) -> np.ndarray:
        return self.kernel @ (self.col_weights * np.asarray(values))

    def adjoint(self) -> "GridOperator":
        return GridOperator(self.kernel.conj().T, self.col_nodes, self.col_weights, self.grid,
                            self.nodes, self.weights)

    def trace(self) -> complex:
        if self.shape[0] != self.shape[1]:
            raise ValueError("trace of a non-square operator")
        return complex(np.sum(self.weights * np.diag(self.kernel)))

    def hs_norm_sq(self) -> float:
        a = np.abs(self.kernel) ** 2
        return float(self.weights @ a @ self.col_weights)

    def hs_norm(self) -> float:
        return self.hs_norm_sq() ** 0.5

    def __add__(self, other: "GridOperator") -> "GridOperator":
        return self._like(self.kernel + other.kernel)

    def __sub__(self, other: "GridOperator") -> "GridOperator":
        return self._like(self.kernel - other.kernel)

    def __mul__(self, c) -> "GridOperator":
        return self._like(self.kernel * c)

    __rmul__ = __mul__

    def relative_hs_distance(self, other: "GridOperator") -> float:
        """``||A - B||_HS / ||B||_HS``."""
        ref = other.hs_norm()
        diff = (self - other).hs_norm()
        return diff / ref if ref > 0 else diff

    def __repr__(self):
        return f"GridOperator({self.shape[0]}x{self.shape[1]})"
