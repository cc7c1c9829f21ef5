"""Finite sums of complex Gaussians and their closed-form integrals.

A :class:`GaussianSum` on ``R^k`` is

    f(z) = sum_m w_m exp(-z^T A_m z + b_m . z)

with complex symmetric ``A_m`` whose real part is positive semi-definite on
the directions that get integrated.  The family is closed under products,
linear pullbacks, multiplication by quadratic phases, partial Fourier
transforms and partial integration, which is all the oscillatory-integral
machinery the rest of the package needs.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = ["GaussianSum", "DivergentIntegralError", "sqrt_det_inv"]


class DivergentIntegralError(ArithmeticError):
    """Integration over directions where the real part is not positive definite."""


def sqrt_det_inv(A: np.ndarray) -> np.ndarray:
    """``det(A)^{-1/2}`` continued analytically from real positive ``A``.

    Eigenvalues of a complex symmetric matrix with positive definite real
    part lie in the right half plane, where the principal square root is
    the continuous branch.
    """
    ev = np.linalg.eigvals(A)
    return np.prod(1.0 / np.sqrt(ev), axis=-1)


def _sym(A):
    return 0.5 * (A + np.swapaxes(A, -1, -2))


@dataclass(frozen=True)
class GaussianSum:
    A: np.ndarray  # (m, k, k)
    b: np.ndarray  # (m, k)
    w: np.ndarray  # (m,)

    def __post_init__(self):
        A = np.asarray(self.A, dtype=complex)
        b = np.asarray(self.b, dtype=complex)
        w = np.asarray(self.w, dtype=complex).reshape(-1)
        if A.ndim == 2:
            A = A[None]
        if b.ndim == 1:
            b = b[None]
        m = w.shape[0]
        if A.shape[0] != m or b.shape[0] != m:
            raise ValueError("inconsistent term counts")
        if A.shape[1:] != (A.shape[1], A.shape[1]) or b.shape[1] != A.shape[1]:
            raise ValueError("inconsistent dimensions")
        object.__setattr__(self, "A", _sym(A))
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "w", w)

    # construction ---------------------------------------------------------
    @classmethod
    def single(cls, A, b=None, w=1.0) -> "GaussianSum":
        A = np.atleast_2d(np.asarray(A, dtype=complex))
        k = A.shape[0]
        b = np.zeros(k) if b is None else np.asarray(b, dtype=complex).reshape(k)
        return cls(A[None], b[None], np.array([w], dtype=complex))

    @classmethod
    def zeros(cls, k: int) -> "GaussianSum":
        return cls(np.zeros((0, k, k)), np.zeros((0, k)), np.zeros(0))

    @classmethod
    def isotropic(cls, k: int, a: float = np.pi, w=1.0) -> "GaussianSum":
        return cls.single(a * np.eye(k), None, w)

    @property
    def k(self) -> int:
        return self.A.shape[1]

    @property
    def nterms(self) -> int:
        return self.w.shape[0]

    # algebra --------------------------------------------------------------
    def __add__(self, other: "GaussianSum") -> "GaussianSum":
        if other.k != self.k:
            raise ValueError("dimension mismatch")
        return GaussianSum(
            np.concatenate([self.A, other.A]),
            np.concatenate([self.b, other.b]),
            np.concatenate([self.w, other.w]),
        )

    def scale(self, c) -> "GaussianSum":
        return GaussianSum(self.A, self.b, self.w * c)

    def __neg__(self):
        return self.scale(-1.0)

    def __sub__(self, other):
        return self + (-other)

    def conj(self) -> "GaussianSum":
        return GaussianSum(self.A.conj(), self.b.conj(), self.w.conj())

    def __mul__(self, other: "GaussianSum") -> "GaussianSum":
        """Pointwise product, expanded termwise."""
        if not isinstance(other, GaussianSum):
            return self.scale(other)
        if other.k != self.k:
            raise ValueError("dimension mismatch")
        A = (self.A[:, None] + other.A[None, :]).reshape(-1, self.k, self.k)
        b = (self.b[:, None] + other.b[None, :]).reshape(-1, self.k)
        w = (self.w[:, None] * other.w[None, :]).reshape(-1)
        return GaussianSum(A, b, w)

    __rmul__ = scale

    def times_quadratic(self, Q, l=None) -> "GaussianSum":
        """Multiply by ``exp(-z^T Q z + l . z)``."""
        Q = np.asarray(Q, dtype=complex)
        b = self.b if l is None else self.b + np.asarray(l, dtype=complex)[None, :]
        return GaussianSum(self.A + Q[None], b, self.w)

    def pullback(self, M, c=None) -> "GaussianSum":
        """``g(z') = f(M z' + c)`` for ``M`` of shape ``(k, k')``."""
        M = np.asarray(M, dtype=float if np.isrealobj(M) else complex)
        A = np.einsum("ji,mjk,kl->mil", M, self.A, M)
        if c is None:
            b = self.b @ M
            w = self.w
        else:
            c = np.asarray(c, dtype=complex)
            Ac = np.einsum("mjk,k->mj", self.A, c)
            b = (self.b - 2.0 * Ac) @ M
            w = self.w * np.exp(-np.einsum("j,mj->m", c, Ac) + self.b @ c)
        return GaussianSum(A, b, w)

    def permute(self, order: Sequence[int]) -> "GaussianSum":
        """Reorder coordinates: new coordinate ``i`` is old ``order[i]``."""
        o = np.asarray(order)
        return GaussianSum(self.A[:, o][:, :, o], self.b[:, o], self.w)

    def extend(self, extra: int) -> "GaussianSum":
        """Append ``extra`` coordinates the function does not depend on."""
        m, k = self.nterms, self.k
        A = np.zeros((m, k + extra, k + extra), dtype=complex)
        A[:, :k, :k] = self.A
        b = np.zeros((m, k + extra), dtype=complex)
        b[:, :k] = self.b
        return GaussianSum(A, b, self.w)

    # integration ------------------------------------------------------------
    def integrate(self, idx: Sequence[int]) -> "GaussianSum":
        """Integrate over the coordinates ``idx``; the others keep their order."""
        idx = list(idx)
        rest = [i for i in range(self.k) if i not in idx]
        if not idx:
            return self
        if self.nterms == 0:
            return GaussianSum.zeros(len(rest))
        A11 = self.A[:, idx][:, :, idx]
        A12 = self.A[:, idx][:, :, rest]
        A22 = self.A[:, rest][:, :, rest]
        b1, b2 = self.b[:, idx], self.b[:, rest]
        re = np.linalg.eigvalsh(A11.real)
        if np.any(re <= 0.0):
            raise DivergentIntegralError(
                "real part of the quadratic form is not positive definite on "
                f"the integrated coordinates (min eigenvalue {re.min():.3g})"
            )
        inv = np.linalg.inv(A11)
        k1 = len(idx)
        A_new = A22 - np.einsum("mij,mjk,mkl->mil", np.swapaxes(A12, 1, 2), inv, A12)
        b_new = b2 - np.einsum("mji,mjk,mk->mi", A12, inv, b1)
        const = 0.25 * np.einsum("mi,mij,mj->m", b1, inv, b1)
        w_new = self.w * np.pi ** (k1 / 2) * sqrt_det_inv(A11) * np.exp(const)
        return GaussianSum(A_new, b_new, w_new)

    def total(self) -> complex:
        """Integral over all of ``R^k``."""
        g = self.integrate(range(self.k))
        return complex(np.sum(g.w))

    def fourier(self, idx: Sequence[int], sign: int = -1) -> "GaussianSum":
        """Fourier transform in the coordinates ``idx``.

        ``F f(..., xi, ...) = int f(..., z, ...) exp(sign 2 pi i xi . z) dz``;
        ``xi`` takes the place of ``z`` in the coordinate order.
        """
        idx = list(idx)
        k, k1 = self.k, len(idx)
        g = self.extend(k1)
        Q = np.zeros((k + k1, k + k1), dtype=complex)
        # -z^T Q z with off-diagonal entries -sign*pi*i gives exp(sign 2 pi i xi.z)
        for j, i in enumerate(idx):
            Q[i, k + j] = Q[k + j, i] = -sign * np.pi * 1j
        g = g.times_quadratic(Q).integrate(idx)
        # remaining order: untouched coordinates, then xi block
        rest = [i for i in range(k) if i not in idx]
        pos = {}
        for j, i in enumerate(rest):
            pos[i] = j
        for j, i in enumerate(idx):
            pos[i] = len(rest) + j
        return g.permute([pos[i] for i in range(k)])

    def l2_norm_sq(self) -> float:
        return float(np.real((self * self.conj()).total()))

    def inner(self, other: "GaussianSum") -> complex:
        """``int self * conj(other)``."""
        return (self * other.conj()).total()

    # evaluation -------------------------------------------------------------
    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        if z.shape[-1] != self.k:
            raise ValueError(f"expected points in R^{self.k}")
        shape = z.shape[:-1]
        zz = z.reshape(-1, self.k)
        if self.nterms == 0:
            return np.zeros(shape, dtype=complex)
        quad = np.einsum("pi,mij,pj->mp", zz, self.A, zz)
        lin = self.b @ zz.T
        vals = np.einsum("m,mp->p", self.w, np.exp(-quad + lin))
        return vals.reshape(shape)

    def __repr__(self):
        return f"GaussianSum(k={self.k}, terms={self.nterms})"
