"""Verification suites: each check compares a computed object with an
independent oracle and records the residual against a tolerance.
"""
from __future__ import annotations

import logging
import math
import time
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .functions import (Bump, legendre_nodes, SchwartzFunction, TildeSchwartzFunction, TildeTerm,
                        random_gaussian_sum)
from .gaussian import GaussianSum
from .grid import GridSpec
from .groups import (GroupElement, Kind, embed, eta_lambda, factorize, identity,
                     inverse, mul, conjugate)
from .orbits import (GridCoverageWarning, SymplecticFourier, b_matrix,
                     canonical_measures, classify_orbit, conjugation_differential, dressing_g,
                     dressing_gt, dressing_via_double, infinitesimal_dressing, omega,
                     poisson_bracket, stabilizer_basis)
from .quantization import (OrbitFunction, intertwining_check, involution, moyal_involution,
                           moyal_product, plancherel_check, q_map, restrict_to_orbit,
                           twisted_multiply)
from .representations import (hs_closed_form, limit_operators, partial_fourier,
                              pi_tilde_pq, pi_tilde_pq_kernel, pi_tilde_rs, pi_tilde_s, pi_r,
                              q_rs, f_r_transform, s_tilde, trace_closed_form)

LOGGER = logging.getLogger(__name__)

__all__ = ["Check", "SuiteResult", "SUITES", "DEFAULT_TOLERANCES", "run_suite", "suite_rng"]


DEFAULT_TOLERANCES: dict[str, float] = {
    "group_assoc": 1e-12,
    "group_unit": 1e-12,
    "group_inverse": 1e-12,
    "dressing_double": 1e-11,
    "left_action": 1e-11,
    "infinitesimal": 1e-7,
    "omega_stabilizer": 1e-12,
    "omega_invariance": 1e-10,
    "det_b": 1e-13,
    "fourier_roundtrip": 1e-6,
    "parseval": 1e-6,
    "fourier_quadrature": 1e-8,
    "trace": 1e-4,
    "hs": 1e-4,
    "homomorphism": 1e-3,
    "adjoint": 1e-3,
    "refinement_factor": 4.0,
    "refinement_floor": 1e-8,
    "moyal_homomorphism": 1e-3,
    "moyal_adjoint": 1e-3,
    "moyal_assoc": 1e-6,
    "classical_slope": 0.9,
    "plancherel_closed": 1e-6,
    "plancherel_grid": 1e-3,
    "intertwining": 1e-3,
    "r_refinement_factor": 2.0,
    "r_refinement_floor": 1e-11,
    "limit_ratio": 1e-3,
    "stilde_offdiag": 1e-3,
    "stilde_diag": 1e-2,
    "fr_unitarity": 1e-8,
    "q_rs_kernel": 1e-6,
}


@dataclass
class Check:
    """One verification record.

    ``comparison`` is ``"le"`` (pass if ``residual <= tolerance``) or
    ``"ge"`` (pass if ``residual >= tolerance``).
    """

    name: str
    anchor: str
    residual: float | None
    tolerance: float
    comparison: str = "le"
    note: str = ""
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        r = self.residual
        if r is None or not math.isfinite(r):
            return False
        return r <= self.tolerance if self.comparison == "le" else r >= self.tolerance

    def as_dict(self, with_time: bool = False) -> dict:
        d = {
            "name": self.name,
            "anchor": self.anchor,
            "residual": None if self.residual is None or not math.isfinite(self.residual)
            else float(self.residual),
            "tolerance": float(self.tolerance),
            "comparison": self.comparison,
            "passed": self.passed,
            "note": self.note,
        }
        if with_time:
            d["wall_time"] = self.wall_time
        return d


@dataclass
class SuiteResult:
    name: str
    checks: list[Check] = field(default_factory=list)
    convergence: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


class _Recorder:
    """Collects checks; an exception inside a check becomes a failed record."""

    def __init__(self, suite: str, tol: dict[str, float]):
        self.result = SuiteResult(suite)
        self.tol = tol

    def check(self, name: str, anchor: str, tol_key: str, fn: Callable[[], float | tuple],
              comparison: str = "le"):
        t0 = time.perf_counter()
        note = ""
        try:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always", GridCoverageWarning)
                out = fn()
            if isinstance(out, tuple):
                out, note = out
            residual = float(out)
            if caught:
                note = "; ".join(filter(None, [note, str(caught[0].message)]))
        except Exception as exc:  # noqa: BLE001 - reported, not raised
            LOGGER.warning("check %s raised %s", name, exc)
            residual, note = None, f"{type(exc).__name__}: {exc}"
        c = Check(name, anchor, residual, self.tol[tol_key], comparison, note,
                  time.perf_counter() - t0)
        LOGGER.info("%-40s residual=%s pass=%s", name, c.residual, c.passed)
        self.result.checks.append(c)
        return c

    def curve(self, name: str, rows: list[tuple]):
        for step, *vals in rows:
            self.result.convergence.append(
                {"check": name, "step": step, **{k: v for k, v in vals[0].items()}})


def suite_rng(seed: int, suite: str) -> np.random.Generator:
    """One generator per suite, independent of which other suites run."""
    key = sum(ord(c) * 31 ** i for i, c in enumerate(suite)) % (2 ** 32)
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(key,)))


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

_SIZE = {Kind.H: (2, 1), Kind.HTILDE: (2, 2), Kind.G: (2, 1), Kind.GTILDE: (2, 2),
         Kind.DOUBLE: (4, 4), Kind.DOUBLE_HG: (4, 2)}


def random_element(rng, kind: Kind, n: int, lo=-2.0, hi=2.0) -> GroupElement:
    vecs, scal = _SIZE[kind]
    return GroupElement(kind, n, rng.uniform(lo, hi, vecs * n + scal))


def _scaled_err(a: GroupElement, b: GroupElement) -> float:
    scale = max(1.0, np.max(np.abs(a.coords)), np.max(np.abs(b.coords)))
    return float(np.max(np.abs(a.coords - b.coords)) / scale)


def _refinement_residual(seq: list[float], factor: float, floor: float) -> tuple[float, str]:
    """Worst step ratio ``r_{k+1}/r_k`` over steps that are still above the floor.

    Reported as the inverse, so passing means ``>= factor``.
    """
    worst = math.inf
    for a, b in zip(seq, seq[1:]):
        if b <= floor:
            continue
        worst = min(worst, a / b if b > 0 else math.inf)
    note = "residuals " + ", ".join(f"{v:.2e}" for v in seq)
    return (worst if math.isfinite(worst) else 1e300), note


def _random_a(rng, n, bump=Bump(1.0, 0.5), nterms=2) -> SchwartzFunction:
    return SchwartzFunction.from_terms(n, [(random_gaussian_sum(rng, 2 * n, nterms), bump)])


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def suite_group_axioms(cfg, rng, rec: _Recorder):
    P = cfg.params
    n, m = P.n, cfg.samples
    anchor = "group laws of H, H~, G, G~ and the double group"
    for kind in Kind:
        def assoc(kind=kind):
            worst = 0.0
            for _ in range(m):
                a, b, c = (random_element(rng, kind, n) for _ in range(3))
                worst = max(worst, _scaled_err(mul(P, mul(P, a, b), c), mul(P, a, mul(P, b, c))))
            return worst

        def unit(kind=kind):
            e = identity(kind, n)
            worst = 0.0
            for _ in range(m):
                g = random_element(rng, kind, n)
                worst = max(worst, _scaled_err(mul(P, e, g), g), _scaled_err(mul(P, g, e), g))
            return worst

        def inv(kind=kind):
            # the identity has zero coordinates in every kind
            worst = 0.0
            for _ in range(m):
                g = random_element(rng, kind, n)
                gi = inverse(P, g)
                s = max(1.0, np.max(np.abs(g.coords)), np.max(np.abs(gi.coords)))
                worst = max(worst, np.max(np.abs(mul(P, g, gi).coords)) / s,
                            np.max(np.abs(mul(P, gi, g).coords)) / s)
            return worst

        rec.check(f"associativity[{kind.value}]", anchor, "group_assoc", assoc)
        rec.check(f"unit[{kind.value}]", anchor, "group_unit", unit)
        rec.check(f"inverse[{kind.value}]", anchor, "group_inverse", inv)

    def closure():
        worst = 0.0
        for _ in range(m):
            h1, h2 = (embed(random_element(rng, Kind.HTILDE, n)) for _ in range(2))
            g1, g2 = (embed(random_element(rng, Kind.GTILDE, n)) for _ in range(2))
            _, gpart = factorize(mul(P, h1, h2))
            hpart, _ = factorize(mul(P, g1, g2))
            worst = max(worst, np.max(np.abs(gpart.coords)), np.max(np.abs(hpart.coords)))
        return worst

    def normal():
        worst = 0.0
        for _ in range(m):
            x = random_element(rng, Kind.H, n)
            xt = GroupElement.from_parts(Kind.HTILDE, n, x=x.x, y=x.y, z=x.z)
            h = random_element(rng, Kind.HTILDE, n)
            worst = max(worst, abs(conjugate(P, h, xt).w))
        return worst

    def factor_roundtrip():
        worst = 0.0
        for _ in range(m):
            d = mul(P, embed(random_element(rng, Kind.GTILDE, n)),
                    embed(random_element(rng, Kind.HTILDE, n)))
            h, g = factorize(d)
            worst = max(worst, _scaled_err(mul(P, embed(h), embed(g)), d))
        return worst

    rec.check("subgroup_closure", "closed subgroups of the double", "group_assoc", closure)
    rec.check("H_normal_in_Htilde", "H is normal in H~", "group_assoc", normal)
    rec.check("factorize_roundtrip", "double group normal form", "group_assoc", factor_roundtrip)


def _random_mu(rng, n, kind=Kind.GTILDE):
    """Mix of generic, r = 0 and point-orbit samples."""
    mu = random_element(rng, kind, n)
    u = rng.uniform()
    if u < 0.15:
        mu = GroupElement.from_parts(kind, n, p=mu.p, q=mu.q)
    elif u < 0.2 and kind is Kind.GTILDE:
        mu = GroupElement.from_parts(kind, n, p=mu.p, s=mu.s)
    elif u < 0.25:
        mu = GroupElement.from_parts(kind, n, **({"s": mu.s} if kind is Kind.GTILDE else {}))
    return mu


def suite_dressing(cfg, rng, rec: _Recorder):
    P = cfg.params
    n, m = P.n, cfg.pairs
    anchor_d = "dressing action by factorization in the double group"

    def via_double():
        worst = 0.0
        for _ in range(m):
            h, mu = random_element(rng, Kind.HTILDE, n), _random_mu(rng, n)
            worst = max(worst, _scaled_err(dressing_via_double(P, h, mu), dressing_gt(P, h, mu)))
        return worst

    def via_double_hg():
        worst = 0.0
        for _ in range(m):
            h, mu = random_element(rng, Kind.H, n), _random_mu(rng, n, Kind.G)
            worst = max(worst, _scaled_err(dressing_via_double(P, h, mu), dressing_g(P, h, mu)))
        return worst

    def left_action(kind_h, kind_g, act):
        def run():
            worst = 0.0
            for _ in range(m):
                h1, h2 = random_element(rng, kind_h, n), random_element(rng, kind_h, n)
                mu = _random_mu(rng, n, kind_g)
                worst = max(worst, _scaled_err(act(P, mul(P, h1, h2), mu),
                                               act(P, h1, act(P, h2, mu))))
            return worst
        return run

    def invariance():
        bad = 0
        for _ in range(m):
            h, mu = random_element(rng, Kind.HTILDE, n), _random_mu(rng, n)
            nu = dressing_gt(P, h, mu)
            bad += not classify_orbit(P, nu).same_as(classify_orbit(P, mu))
            bad += nu.r != mu.r
        return bad, "count of samples whose orbit or r changed"

    def infinitesimal():
        worst, eps = 0.0, 1e-5
        for _ in range(m):
            X, mu = rng.uniform(-2, 2, 2 * n + 2), _random_mu(rng, n)
            plus = dressing_gt(P, GroupElement(Kind.HTILDE, n, eps * X), mu).coords
            minus = dressing_gt(P, GroupElement(Kind.HTILDE, n, -eps * X), mu).coords
            fd = (plus - minus) / (2 * eps)
            worst = max(worst, np.max(np.abs(fd - infinitesimal_dressing(P, X, mu))))
        return worst

    rec.check("double_vs_closed[Gtilde]", anchor_d, "dressing_double", via_double)
    rec.check("double_vs_closed[G]", anchor_d, "dressing_double", via_double_hg)
    rec.check("left_action[G]", "dressing action of H on G", "left_action",
              left_action(Kind.H, Kind.G, dressing_g))
    rec.check("left_action[Gtilde]", "dressing action of H~ on G~", "left_action",
              left_action(Kind.HTILDE, Kind.GTILDE, dressing_gt))
    rec.check("orbit_invariance", "dressing orbits in G~", "group_assoc", invariance)
    rec.check("infinitesimal_vs_fd", "infinitesimal dressing", "infinitesimal", infinitesimal)

    def stabilizer():
        worst = 0.0
        for _ in range(m):
            mu = _random_mu(rng, n)
            B = stabilizer_basis(P, mu)
            orb = classify_orbit(P, mu)
            if len(B) + orb.dim != 2 * n + 2:
                return math.inf, f"dimension count fails at {mu}"
            for v in B:
                worst = max(worst, np.max(np.abs(infinitesimal_dressing(P, v, mu))))
                for _ in range(3):
                    X = rng.uniform(-2, 2, 2 * n + 2)
                    worst = max(worst, abs(omega(P, mu, X, v)))
        return worst

    def omega_inv():
        worst = 0.0
        for _ in range(cfg.omega_samples):
            h, mu = random_element(rng, Kind.HTILDE, n), _random_mu(rng, n)
            X, Y = rng.uniform(-2, 2, 2 * n + 2), rng.uniform(-2, 2, 2 * n + 2)
            lhs = omega(P, dressing_gt(P, h, mu), conjugation_differential(h, X),
                        conjugation_differential(h, Y))
            rhs = omega(P, mu, X, Y)
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
        return worst

    def pairing(X, T):
        # <X, T> = x.T_p + y.T_q + z.T_r + w.T_s
        return float(np.dot(X, T))

    def bracket_vs_omega():
        worst = 0.0
        for _ in range(m):
            mu = _random_mu(rng, n)
            X, Y = rng.uniform(-2, 2, 2 * n + 2), rng.uniform(-2, 2, 2 * n + 2)
            a = poisson_bracket(P, Kind.GTILDE, X, Y, mu)
            b = omega(P, mu, X, Y)
            c = pairing(X, infinitesimal_dressing(P, Y, mu))
            d = -pairing(Y, infinitesimal_dressing(P, X, mu))
            worst = max(worst, abs(a - b), abs(b - c), abs(b - d))
        return worst

    rec.check("omega_stabilizer", "well-definedness of the orbit form", "omega_stabilizer",
              stabilizer)
    rec.check("omega_invariance", "invariance of the orbit form", "omega_invariance", omega_inv)
    rec.check("bracket_vs_omega", "Poisson bracket on G~ versus the orbit form",
              "omega_stabilizer", bracket_vs_omega)


def suite_measures(cfg, rng, rec: _Recorder):
    P = cfg.params
    n = P.n

    def det_generic():
        worst = 0.0
        for r in rng.uniform(-2, 2, 20):
            for kind in (Kind.G, Kind.GTILDE):
                mu = GroupElement.from_parts(kind, n, r=r)
                if kind is Kind.GTILDE:
                    mu = GroupElement.from_parts(kind, n, p=rng.uniform(-1, 1, n),
                                                 q=rng.uniform(-1, 1, n), r=r, s=0.3)
                orb = classify_orbit(P, mu)
                det = np.linalg.det(b_matrix(P, orb, mu))
                ref = float(eta_lambda(P, r)) ** (2 * n)
                worst = max(worst, abs(det - ref) / ref)
        return worst

    def det_2d():
        worst = 0.0
        for _ in range(20):
            p = rng.uniform(-2, 2, n)
            mu = GroupElement.from_parts(Kind.GTILDE, n, p=p, s=1.0)
            orb = classify_orbit(P, mu)
            det = np.linalg.det(b_matrix(P, orb, mu))
            ref = np.max(np.abs(p)) ** 2
            dm, dt = canonical_measures(P, orb, mu)
            worst = max(worst, abs(det - ref) / ref, abs(dm * dt - 1.0))
        return worst

    rec.check("detB_generic", "det B = eta^{2n} on generic orbits", "det_b", det_generic)
    rec.check("detB_2d_and_duality", "canonical measures dm and dtheta", "det_b", det_2d)

    funcs = [random_gaussian_sum(rng, 2 * n, 2) for _ in range(cfg.fourier_functions)]
    rs = rng.uniform(0.5, 1.5, len(funcs))

    def analytic():
        rt, pv = 0.0, 0.0
        for g, r in zip(funcs, rs):
            orb = classify_orbit(P, GroupElement.from_parts(Kind.G, n, r=r))
            SF = SymplecticFourier(P, orb)
            F = SF.forward_gaussian(g)
            back = SF.inverse_gaussian(F)
            z = rng.uniform(-1.5, 1.5, (50, 2 * n))
            rt = max(rt, np.max(np.abs(back(z) - g(z))) / np.max(np.abs(g(z))))
            pv = max(pv, abs(F.l2_norm_sq() * SF.dtheta - g.l2_norm_sq() * SF.dm)
                     / (g.l2_norm_sq() * SF.dm))
        return rt, pv

    res = {}

    def rt_a():
        res["a"] = analytic()
        return res["a"][0]

    rec.check("fourier_roundtrip[analytic]", "symplectic Fourier transform", "fourier_roundtrip",
              rt_a)
    rec.check("parseval[analytic]", "symplectic Fourier transform", "parseval",
              lambda: res["a"][1])

    if 2 * n <= 2:
        grid = GridSpec(cfg.grid.extent, cfg.grid.points, "trapezoid", 1)
        x, w = grid.nodes_1d()

        def grid_route():
            rt, pv, quad = 0.0, 0.0, 0.0
            X, Y = np.meshgrid(x, x, indexing="ij")
            Z = np.stack([X, Y], -1)
            for g, r in zip(funcs, rs):
                orb = classify_orbit(P, GroupElement.from_parts(Kind.G, n, r=r))
                SF = SymplecticFourier(P, orb)
                vals = g(Z)
                F = SF.forward_grid(vals, x, w)
                exact = SF.forward_gaussian(g)(Z)
                quad = max(quad, np.max(np.abs(F - exact)) / np.max(np.abs(exact)))
                back = SF.inverse_grid(F, x, w)
                rt = max(rt, np.max(np.abs(back - vals)) / np.max(np.abs(vals)))
                pv = max(pv, abs(SF.l2_orbit(F, w) - SF.l2_v(vals, w)) / SF.l2_v(vals, w))
            return rt, pv, quad

        def rt_g():
            res["g"] = grid_route()
            return res["g"][0]

        rec.check("fourier_roundtrip[grid]", "symplectic Fourier transform", "fourier_roundtrip",
                  rt_g)
        rec.check("parseval[grid]", "symplectic Fourier transform", "parseval",
                  lambda: res["g"][1])
        rec.check("fourier_grid_vs_closed", "symplectic Fourier transform",
                  "fourier_quadrature", lambda: res["g"][2])


def _test_family(rng, n, count):
    """Standard Gaussian plus random Gaussian sums, all with the r-bump on [0.5, 1.5]."""
    out = [SchwartzFunction.gaussian(n)]
    out += [_random_a(rng, n) for _ in range(count - 1)]
    return out


def suite_representations(cfg, rng, rec: _Recorder):
    P, grid = cfg.params, cfg.grid
    n = P.n
    fam = _test_family(rng, n, 3)
    rs = [0.7, 1.0, 1.3]
    anchor_t = "trace formula"

    def fourier_probe():
        f = fam[1]
        fh = partial_fourier(f)
        x = np.linspace(-7, 7, 281)
        h = x[1] - x[0]
        worst = 0.0
        if n != 1:
            return 0.0, "quadrature probe runs for n = 1 only"
        X, Y = np.meshgrid(x, x, indexing="ij")
        vals = f.slice(1.0)(np.stack([X, Y], -1))
        for p, q in rng.uniform(-1.5, 1.5, (100, 2)):
            quad = np.sum(vals * np.exp(-2j * np.pi * (p * X + q * Y))) * h * h
            worst = max(worst, abs(quad - fh(p, q, 1.0)))
        return worst

    rec.check("partial_fourier_vs_quadrature", "partial Fourier transform", "fourier_quadrature",
              fourier_probe)

    def trace():
        worst = 0.0
        for f in fam:
            for r in rs:
                ref = trace_closed_form(P, f, r)
                worst = max(worst, abs(pi_r(P, f, r, grid).trace() - ref) / abs(ref))
        return worst

    def hs():
        worst = 0.0
        for f in fam:
            for r in rs:
                ref = hs_closed_form(P, f, r)
                worst = max(worst, abs(pi_r(P, f, r, grid).hs_norm_sq() - ref) / ref)
        return worst

    rec.check("trace_formula", anchor_t, "trace", trace)
    rec.check("hs_corollary", "Hilbert-Schmidt norm corollary", "hs", hs)

    f, g = fam[1], fam[2]
    fg, fs = twisted_multiply(P, f, g), involution(P, f)
    r0 = 1.1

    def hom(gr=grid):
        A, B = pi_r(P, f, r0, gr), pi_r(P, g, r0, gr)
        return (A @ B).relative_hs_distance(pi_r(P, fg, r0, gr))

    def adj(gr=grid):
        return pi_r(P, f, r0, gr).adjoint().relative_hs_distance(pi_r(P, fs, r0, gr))

    rec.check("homomorphism", "representations of A; twisted product", "homomorphism", hom)
    rec.check("adjoint", "representations of A; involution", "adjoint", adj)

    for label, fn in (("homomorphism", hom), ("adjoint", adj),
                      ("trace", lambda gr: abs(pi_r(P, f, r0, gr).trace()
                                                - trace_closed_form(P, f, r0))
                       / abs(trace_closed_form(P, f, r0)))):
        def conv(fn=fn, label=label):
            ladder = grid.ladder(4)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", GridCoverageWarning)
                seq = [fn(gr) for gr in ladder]
            rec.curve(label, [(i, {"points": gr.points, "extent": gr.extent, "residual": v})
                              for i, (gr, v) in enumerate(zip(ladder, seq))])
            return _refinement_residual(seq, cfg.tol["refinement_factor"],
                                        cfg.tol["refinement_floor"])
        rec.check(f"refinement[{label}]", "grid convergence", "refinement_factor", conv, "ge")

    def qmap_identity():
        orb = classify_orbit(P, GroupElement.from_parts(Kind.G, n, r=r0))
        phi = restrict_to_orbit(P, f, orb)
        return q_map(phi, grid).relative_hs_distance(pi_r(P, f, r0, grid))

    rec.check("q_map_of_restriction", "quantization map inverts f -> fhat|O", "homomorphism",
              qmap_identity)

    def pq_scaling():
        ft = TildeSchwartzFunction.gaussian(n) + _tilde_random(rng, n)
        d = np.linspace(-3, 3, 41)
        worst = 0.0
        for l in (-0.7, 0.4, 1.3):
            p, q = rng.uniform(-1, 1, n), rng.uniform(-1, 1, n)
            a = pi_tilde_pq_kernel(ft, np.exp(l) * p, np.exp(-l) * q, d, d)
            b = pi_tilde_pq_kernel(ft, p, q, d + l, d + l)
            worst = max(worst, np.max(np.abs(a - b)) / np.max(np.abs(b)))
        return worst

    if n == 1:
        rec.check("pi_tilde_pq_scaling", "equivalence of pi~_{p,q} under dilation",
                  "q_rs_kernel", pq_scaling)


def _tilde_random(rng, n):
    return TildeSchwartzFunction(n, [
        TildeTerm(random_gaussian_sum(rng, 2 * n, 1), Bump(0.0, 2.0), Bump(0.2, 0.8))])


def _strictly_decreasing(seq):
    return all(b < a for a, b in zip(seq, seq[1:]))


def suite_topology(cfg, rng, rec: _Recorder):
    P, grid = cfg.params, cfg.grid
    n = P.n
    f = TildeSchwartzFunction.gaussian(n, rbump=Bump(0.0, 2.0))
    s = 0.3
    d_grid = GridSpec(grid.extent, grid.points, grid.rule, 1)
    store = {}

    def limits():
        store["L"] = limit_operators(P, f, s, grid, d_grid)
        return 0.0

    rec.check("limit_operators_built", "limit representations S, S~, T, T~, Q", "limit_ratio",
              limits)
    L = store.get("L")
    if L is None:
        return

    def pq_seq():
        seq = [pi_tilde_pq(f, np.full(n, 2.0 ** -k), np.full(n, 2.0 ** -k), d_grid)
               .relative_hs_distance(L["S"]) for k in range(17)]
        rec.curve("pi_pq_to_S", [(k, {"p": 2.0 ** -k, "distance": v}) for k, v in enumerate(seq)])
        if not _strictly_decreasing(seq):
            return math.inf, "sequence not strictly decreasing"
        return seq[-1] / seq[0], f"first {seq[0]:.3e}, last {seq[-1]:.3e}"

    def rs_seq():
        seq = [pi_tilde_rs(P, f, 2.0 ** -k, s, grid).relative_hs_distance(L["T"])
               for k in range(13)]
        rec.curve("pi_rs_to_T", [(k, {"r": 2.0 ** -k, "distance": v}) for k, v in enumerate(seq)])
        if not _strictly_decreasing(seq):
            return math.inf, "sequence not strictly decreasing"
        return seq[-1] / seq[0], f"first {seq[0]:.3e}, last {seq[-1]:.3e}"

    rec.check("pi_pq_to_S", "limit points of pi~_{p,q} as (p,q) -> 0", "limit_ratio", pq_seq)
    rec.check("pi_rs_to_T", "limit points of pi~_{r,s} as r -> 0", "limit_ratio", rs_seq)

    def offdiag():
        C = s_tilde(f, GridSpec(d_grid.extent, d_grid.points, "periodic", 1))[2]
        dg = np.diag(C)
        return float(np.linalg.norm(C - np.diag(dg)) / np.linalg.norm(dg))

    def diag():
        _, sv, C = s_tilde(f, GridSpec(d_grid.extent, d_grid.points, "periodic", 1))
        ref = np.array([pi_tilde_s(f, -x) for x in sv])
        return float(np.max(np.abs(np.diag(C) - ref)) / np.max(np.abs(ref)))

    rec.check("S_tilde_offdiagonal", "S~ is a direct integral of pi~_s", "stilde_offdiag",
              offdiag)
    rec.check("S_tilde_diagonal", "S~ is a direct integral of pi~_s", "stilde_diag", diag)

    def unitarity():
        worst = 0.0
        for r in (0.25, 0.8, -0.6):
            F, Fi = f_r_transform(P, r, points=grid.points if n == 1 else 16)
            I = np.eye(F.shape[0])
            w = F.weights[None, :]
            worst = max(worst, np.max(np.abs((F.adjoint() @ F).kernel * w - I)),
                        np.max(np.abs((F @ Fi).kernel * w - I)))
        return worst

    def qrs():
        c, d = q_rs(P, f, 0.8, s, points=grid.points if n == 1 else 16)
        return c.relative_hs_distance(d)

    def t_equiv():
        # closed form: T~ xi(a) = int f(x, y, 0, w) e(a.x) e(-s w) e^{n w/2} xi(e^w a)
        Tt = L["T_tilde"]
        a = Tt.nodes
        xi = lambda v: np.exp(-np.pi * np.sum(v * v, axis=-1) / 2.0)  # noqa: E731
        direct = np.zeros(len(a), dtype=complex)
        for term in f.terms:
            gx = term.gauss.fourier(range(n), sign=+1).integrate(range(n, 2 * n))
            w, ww = legendre_nodes(*term.wbump.support, 64)
            for wi, ci in zip(w, ww * term.wbump(w)):
                direct += (term.rbump(0.0) * ci * np.exp(-2j * np.pi * s * wi + 0.5 * n * wi)
                           * gx(a) * xi(np.exp(wi) * a))
        return float(np.max(np.abs(Tt.apply(xi(a)) - direct)) / np.max(np.abs(direct)))

    rec.check("F_r_unitarity", "the transform F_r", "fr_unitarity", unitarity)
    rec.check("Q_rs_kernel", "Q_{r,s} = F_r pi~_{r,s} F_r^{-1}", "q_rs_kernel", qrs)
    rec.check("T_tilde_action", "T~ = F T F^{-1}", "q_rs_kernel", t_equiv)


def suite_moyal(cfg, rng, rec: _Recorder):
    P, grid = cfg.params, cfg.grid
    n = P.n
    r0 = 1.1
    orb = classify_orbit(P, GroupElement.from_parts(Kind.G, n, r=r0))
    phi, psi, chi = (OrbitFunction(orb, gauss=random_gaussian_sum(rng, 2 * n, k))
                     for k in (2, 1, 1))

    def hom():
        lhs = q_map(moyal_product(phi, psi), grid)
        return (q_map(phi, grid) @ q_map(psi, grid)).relative_hs_distance(lhs)

    def adj():
        return q_map(phi, grid).adjoint().relative_hs_distance(q_map(moyal_involution(phi), grid))

    z = rng.uniform(-1.0, 1.0, (40, 2 * n))

    def assoc():
        a = moyal_product(moyal_product(phi, psi), chi).gauss(z)
        b = moyal_product(phi, moyal_product(psi, chi)).gauss(z)
        return float(np.max(np.abs(a - b)) / np.max(np.abs(b)))

    def star_axioms():
        twice = moyal_involution(moyal_involution(phi)).gauss(z)
        e1 = np.max(np.abs(twice - phi.gauss(z))) / np.max(np.abs(phi.gauss(z)))
        a = moyal_involution(moyal_product(phi, psi)).gauss(z)
        b = moyal_product(moyal_involution(psi), moyal_involution(phi)).gauss(z)
        return float(max(e1, np.max(np.abs(a - b)) / np.max(np.abs(b))))

    def isometry():
        return abs(q_map(phi, grid).hs_norm_sq() - phi.l2_norm_sq()) / phi.l2_norm_sq()

    def point():
        po = classify_orbit(P, GroupElement.from_parts(Kind.G, n, p=rng.uniform(-1, 1, n),
                                                       q=rng.uniform(-1, 1, n)))
        a, b = complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2))
        fa, fb = OrbitFunction(po, value=a), OrbitFunction(po, value=b)
        e = abs(moyal_product(fa, fb).value - a * b) + abs(moyal_involution(fa).value - a.conjugate())
        e += abs(q_map(moyal_product(fa, fb)) - q_map(fa) * q_map(fb))
        return e

    def slope():
        # fixed pair on O_1; the probe box is [-2, 2]^{2n}
        o1 = classify_orbit(P, GroupElement.from_parts(Kind.G, n, r=1.0))
        a = OrbitFunction(o1, gauss=GaussianSum.isotropic(2 * n))
        A = np.pi * np.diag(np.r_[np.ones(n), 2 * np.ones(n)])
        b = OrbitFunction(o1, gauss=GaussianSum.single(A, np.r_[np.full(n, 0.5),
                                                                 np.full(n, -0.3)]))
        axis = np.linspace(-2, 2, 41 if n == 1 else 9)
        zz = np.stack(np.meshgrid(*[axis] * (2 * n), indexing="ij"), -1).reshape(-1, 2 * n)
        hs = [2.0 ** -k for k in range(1, 5)]
        errs = [float(np.max(np.abs(moyal_product(a, b, h).gauss(zz)
                                    - a.gauss(zz) * b.gauss(zz)))) for h in hs]
        rec.curve("classical_limit", [(i, {"hbar": h, "sup_error": e})
                                      for i, (h, e) in enumerate(zip(hs, errs))])
        sl = np.polyfit(np.log(hs), np.log(errs), 1)[0]
        return float(sl), "errors " + ", ".join(f"{e:.2e}" for e in errs)

    anchor = "deformed product on orbits"
    rec.check("q_map_homomorphism", anchor, "moyal_homomorphism", hom)
    rec.check("q_map_adjoint", anchor, "moyal_adjoint", adj)
    rec.check("moyal_associativity", anchor, "moyal_assoc", assoc)
    rec.check("moyal_star_axioms", anchor, "moyal_assoc", star_axioms)
    rec.check("q_map_isometry", "Hilbert-Schmidt norm corollary", "hs", isometry)
    rec.check("point_orbit_product", anchor, "moyal_assoc", point)
    rec.check("classical_limit_slope", "hbar scaling of the orbit form", "classical_slope",
              slope, "ge")


def suite_plancherel(cfg, rng, rec: _Recorder):
    P, grid = cfg.params, cfg.grid
    n = P.n
    fam = _test_family(rng, n, 3)
    store = {}

    def compute():
        store["res"] = [plancherel_check(P, f, cfg.r_nodes, grid) for f in fam]
        return max(r.closed_residual for r in store["res"])

    anchor = "Plancherel formula"
    rec.check("plancherel_closed", anchor, "plancherel_closed", compute)
    rec.check("plancherel_grid", anchor, "plancherel_grid",
              lambda: max(r.grid_residual for r in store["res"]))

    def r_conv():
        ms = [4, 8, 16, 32, 64]
        seq = [plancherel_check(P, fam[1], m).closed_residual for m in ms]
        rec.curve("plancherel_r_quadrature", [(i, {"nodes": m, "residual": v})
                                              for i, (m, v) in enumerate(zip(ms, seq))])
        return _refinement_residual(seq, 2.0, cfg.tol["r_refinement_floor"])

    rec.check("plancherel_r_refinement", anchor, "r_refinement_factor", r_conv, "ge")

    def inter():
        f, xi = fam[1], fam[2]
        samples = np.linspace(0.55, 1.45, 8)
        return intertwining_check(P, f, xi, samples, grid)

    rec.check("intertwining", "regular representation as a direct integral", "intertwining",
              inter)


SUITES: dict[str, Callable] = {
    "group-axioms": suite_group_axioms,
    "dressing": suite_dressing,
    "measures": suite_measures,
    "representations": suite_representations,
    "topology": suite_topology,
    "moyal": suite_moyal,
    "plancherel": suite_plancherel,
}


def run_suite(name: str, cfg) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    rec = _Recorder(name, cfg.tol)
    SUITES[name](cfg, suite_rng(cfg.seed, name), rec)
    return rec.result
