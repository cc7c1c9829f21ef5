"""Closed-form arithmetic for the Heisenberg-type Poisson-Lie groups.

Six coordinate groups are supported:

``H``        Heisenberg group, coordinates ``(x, y, z)``.
``HTILDE``   extended Heisenberg group, ``(x, y, z, w)``.
``G``        dual group of ``H``, ``(p, q, r)``.
``GTILDE``   dual group of ``HTILDE``, ``(p, q, r, s)``.
``DOUBLE``   double group ``HTILDE x GTILDE``, ``(x, y, z, w; p, q, r, s)``.
``DOUBLE_HG`` double group ``H x G``, ``(x, y, z; p, q, r)``.

``x, y, p, q`` are n-vectors, the remaining slots are scalars.  The
deformation constant ``lam`` and the dimension ``n`` live in
:class:`ModelParams`, never inside the elements.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Kind",
    "ModelParams",
    "GroupElement",
    "eta_lambda",
    "identity",
    "mul",
    "inverse",
    "embed",
    "factorize",
    "conjugate",
]


class Kind(enum.Enum):
    H = "H"
    HTILDE = "Htilde"
    G = "G"
    GTILDE = "Gtilde"
    DOUBLE = "Double"
    DOUBLE_HG = "DoubleHG"


# slot name -> True if the slot is an n-vector
_LAYOUT: dict[Kind, tuple[tuple[str, bool], ...]] = {
    Kind.H: (("x", True), ("y", True), ("z", False)),
    Kind.HTILDE: (("x", True), ("y", True), ("z", False), ("w", False)),
    Kind.G: (("p", True), ("q", True), ("r", False)),
    Kind.GTILDE: (("p", True), ("q", True), ("r", False), ("s", False)),
    Kind.DOUBLE: (
        ("x", True), ("y", True), ("z", False), ("w", False),
        ("p", True), ("q", True), ("r", False), ("s", False),
    ),
    Kind.DOUBLE_HG: (
        ("x", True), ("y", True), ("z", False),
        ("p", True), ("q", True), ("r", False),
    ),
}

_SLOTS = ("x", "y", "z", "w", "p", "q", "r", "s")


@dataclass(frozen=True)
class ModelParams:
    """Global model constants: deformation ``lam`` and dimension ``n``."""

    lam: float = 0.0
    n: int = 1

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")

    def eta(self, r):
        return eta_lambda(self, r)


def eta_lambda(params: ModelParams, r):
    """Return ``(exp(2 lam r) - 1) / (2 lam)``, and ``r`` itself when ``lam == 0``.

    ``expm1`` keeps the expression accurate as ``lam * r -> 0``, so the value
    is continuous in ``lam``.  Works elementwise on arrays.
    """
    lam = float(params.lam)
    if lam == 0.0:
        return r * 1.0
    r = np.asarray(r, dtype=float)
    x = 2.0 * lam * r
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(x == 0.0, 1.0, np.expm1(x) / np.where(x == 0.0, 1.0, x))
    out = r * ratio
    return out if out.ndim else float(out)


def _offsets(kind: Kind, n: int) -> dict[str, slice | int]:
    out: dict[str, slice | int] = {}
    i = 0
    for name, vec in _LAYOUT[kind]:
        if vec:
            out[name] = slice(i, i + n)
            i += n
        else:
            out[name] = i
            i += 1
    return out


def _size(kind: Kind, n: int) -> int:
    return sum(n if vec else 1 for _, vec in _LAYOUT[kind])


@dataclass(frozen=True, eq=False)
class GroupElement:
    """A point of one of the coordinate groups.

    Slots that the kind does not carry read as zero.
    """

    kind: Kind
    n: int
    coords: np.ndarray

    def __post_init__(self):
        c = np.array(self.coords, dtype=float).reshape(-1)
        if c.size != _size(self.kind, self.n):
            raise ValueError(
                f"{self.kind.value} with n={self.n} needs {_size(self.kind, self.n)} "
                f"coordinates, got {c.size}"
            )
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    @classmethod
    def from_parts(cls, kind: Kind, n: int, **parts) -> "GroupElement":
        off = _offsets(kind, n)
        unknown = set(parts) - set(off)
        if unknown:
            raise ValueError(f"{kind.value} has no slots {sorted(unknown)}")
        c = np.zeros(_size(kind, n))
        for name, val in parts.items():
            c[off[name]] = val
        return cls(kind, n, c)

    def part(self, name: str):
        off = _offsets(self.kind, self.n)
        if name not in off:
            if name not in _SLOTS:
                raise AttributeError(name)
            return np.zeros(self.n) if name in ("x", "y", "p", "q") else 0.0
        v = self.coords[off[name]]
        return v.copy() if isinstance(v, np.ndarray) else float(v)

    x = property(lambda self: self.part("x"))
    y = property(lambda self: self.part("y"))
    z = property(lambda self: self.part("z"))
    w = property(lambda self: self.part("w"))
    p = property(lambda self: self.part("p"))
    q = property(lambda self: self.part("q"))
    r = property(lambda self: self.part("r"))
    s = property(lambda self: self.part("s"))

    def allclose(self, other: "GroupElement", rtol=1e-12, atol=1e-12) -> bool:
        return (
            self.kind == other.kind
            and self.n == other.n
            and np.allclose(self.coords, other.coords, rtol=rtol, atol=atol)
        )

    def __repr__(self):
        vals = ", ".join(f"{v:.6g}" for v in self.coords)
        return f"GroupElement({self.kind.value}, n={self.n}, [{vals}])"


def _check_pair(a: GroupElement, b: GroupElement):
    if a.kind != b.kind:
        raise ValueError(f"kind mismatch: {a.kind.value} vs {b.kind.value}")
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: n={a.n} vs n={b.n}")


def identity(kind: Kind, n: int) -> GroupElement:
    return GroupElement(kind, n, np.zeros(_size(kind, n)))


def _build(kind, n, **parts):
    return GroupElement.from_parts(kind, n, **parts)


def mul(params: ModelParams, a: GroupElement, b: GroupElement) -> GroupElement:
    """Group product ``a * b`` under the closed-form law of ``a.kind``."""
    _check_pair(a, b)
    kind, n, lam = a.kind, a.n, float(params.lam)
    if kind is Kind.H:
        return _build(kind, n, x=a.x + b.x, y=a.y + b.y, z=a.z + b.z + a.x @ b.y)
    if kind is Kind.HTILDE:
        ew = np.exp(a.w)
        return _build(
            kind, n,
            x=a.x + ew * b.x,
            y=a.y + b.y / ew,
            z=a.z + b.z + (a.x @ b.y) / ew,
            w=a.w + b.w,
        )
    if kind in (Kind.G, Kind.GTILDE):
        el = np.exp(lam * b.r)
        parts = dict(p=el * a.p + b.p, q=el * a.q + b.q, r=a.r + b.r)
        if kind is Kind.GTILDE:
            parts["s"] = a.s + b.s
        return _build(kind, n, **parts)
    # double groups; DOUBLE_HG is the w = s = 0 restriction of the same law
    eta = eta_lambda(params, a.r)
    e_x = np.exp(lam * a.r + a.w)
    e_y = np.exp(lam * a.r - a.w)
    e_p = np.exp(lam * b.r + b.w)
    e_q = np.exp(lam * b.r - b.w)
    xy = b.x @ b.y
    parts = dict(
        x=a.x + e_x * b.x,
        y=a.y + e_y * b.y,
        z=a.z + b.z + e_y * (a.x @ b.y) - lam * (a.p @ b.x) - lam * (a.q @ b.y)
        + lam * eta * xy,
        p=e_p * a.p + b.p - e_p * eta * b.y,
        q=e_q * a.q + b.q + e_q * eta * b.x,
        r=a.r + b.r,
    )
    if kind is Kind.DOUBLE:
        parts["w"] = a.w + b.w
        parts["s"] = a.s + b.s - a.p @ b.x + a.q @ b.y + eta * xy
    return _build(kind, n, **parts)


def inverse(params: ModelParams, a: GroupElement) -> GroupElement:
    """Closed-form inverse.

    H:       (-x, -y, -z + x.y)
    Htilde:  (-e^{-w} x, -e^{w} y, -z + x.y, -w)
    G:       (-e^{-lam r} p, -e^{-lam r} q, -r)
    Gtilde:  as G, with -s
    doubles: g^{-1} h^{-1} for the normal form d = h g.
    """
    kind, n, lam = a.kind, a.n, float(params.lam)
    if kind is Kind.H:
        return _build(kind, n, x=-a.x, y=-a.y, z=-a.z + a.x @ a.y)
    if kind is Kind.HTILDE:
        return _build(
            kind, n, x=-np.exp(-a.w) * a.x, y=-np.exp(a.w) * a.y,
            z=-a.z + a.x @ a.y, w=-a.w,
        )
    if kind in (Kind.G, Kind.GTILDE):
        el = np.exp(-lam * a.r)
        parts = dict(p=-el * a.p, q=-el * a.q, r=-a.r)
        if kind is Kind.GTILDE:
            parts["s"] = -a.s
        return _build(kind, n, **parts)
    h, g = factorize(a)
    return mul(params, embed(inverse(params, g)), embed(inverse(params, h)))


_EMBED_TARGET = {
    Kind.H: Kind.DOUBLE_HG,
    Kind.G: Kind.DOUBLE_HG,
    Kind.HTILDE: Kind.DOUBLE,
    Kind.GTILDE: Kind.DOUBLE,
}


def embed(elem: GroupElement) -> GroupElement:
    """Zero-pad a factor-group element into its double group."""
    if elem.kind not in _EMBED_TARGET:
        raise ValueError(f"cannot embed a {elem.kind.value} element")
    target = _EMBED_TARGET[elem.kind]
    parts = {name: elem.part(name) for name, _ in _LAYOUT[elem.kind]}
    return _build(target, elem.n, **parts)


def factorize(d: GroupElement) -> tuple[GroupElement, GroupElement]:
    """Split a double-group element as ``embed(h) * embed(g)``.

    The normal form is read off the coordinates: ``h`` takes the first
    block of slots, ``g`` the second.
    """
    if d.kind is Kind.DOUBLE:
        hk, gk = Kind.HTILDE, Kind.GTILDE
    elif d.kind is Kind.DOUBLE_HG:
        hk, gk = Kind.H, Kind.G
    else:
        raise ValueError(f"factorize needs a double-group element, got {d.kind.value}")
    h = _build(hk, d.n, **{name: d.part(name) for name, _ in _LAYOUT[hk]})
    g = _build(gk, d.n, **{name: d.part(name) for name, _ in _LAYOUT[gk]})
    return h, g


def conjugate(params: ModelParams, h: GroupElement, x: GroupElement) -> GroupElement:
    """``h x h^{-1}``."""
    return mul(params, mul(params, h, x), inverse(params, h))
