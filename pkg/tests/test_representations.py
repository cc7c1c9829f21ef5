import warnings

import numpy as np
import pytest
from scipy import integrate

from heisenberg_orbits import GridCoverageWarning
from heisenberg_orbits.functions import Bump, SchwartzFunction, TildeSchwartzFunction
from heisenberg_orbits.gaussian import GaussianSum
from heisenberg_orbits.grid import GridSpec
from heisenberg_orbits.groups import ModelParams, eta_lambda
from heisenberg_orbits.representations import (f_r_transform, fourier_grid, hs_norm_check,
                                               limit_operators, partial_fourier, pi_pq, pi_r,
                                               pi_tilde_pq, pi_tilde_pq_kernel, pi_tilde_rs,
                                               pi_tilde_s, q_rs, s_tilde, tilde_rs_kernel,
                                               trace_closed_form)
from oracles import dense_kernel_pi_r, quad_fourier_2d

GRID = GridSpec(6.0, 128)


def chirped(bump=Bump(1.0, 0.5)):
    A = np.array([[np.pi * 1.2 + 0.3j, 0.2], [0.2, np.pi * 0.8 - 0.1j]])
    return SchwartzFunction.gaussian(1, A, [0.3 + 0.2j, -0.4j], 0.8 + 0.3j, bump)


# partial Fourier and point orbits ------------------------------------------------

def test_standard_gaussian_is_self_dual():
    fh = partial_fourier(SchwartzFunction.gaussian(1))
    for p, q, r in [(0, 0, 1.0), (0.3, -0.5, 1.0), (1, 1, 1.2)]:
        expect = np.exp(-np.pi * (p * p + q * q)) * Bump(1.0, 0.5)(r)
        assert fh(p, q, r) == pytest.approx(expect, rel=1e-14)


def test_even_function_has_real_transform():
    f = SchwartzFunction.gaussian(1, np.array([[2.0, 0.5], [0.5, 1.0]]))
    v = partial_fourier(f)(0.4, -0.7, 1.1)
    assert abs(v.imag) <= 1e-15 * abs(v.real)


def test_partial_fourier_against_quadrature():
    f = chirped()
    g = f.slice(1.0)
    fun = lambda x, y: g(np.array([[x, y]]))[0]  # noqa: E731
    fh = partial_fourier(f)
    for p, q in [(0.0, 0.0), (0.25, -0.4)]:
        assert fh(p, q, 1.0) == pytest.approx(quad_fourier_2d(fun, p, q), rel=1e-8, abs=1e-12)


def test_pi_pq_examples():
    f = SchwartzFunction.gaussian(1, bump=Bump(0.0, 1.0))
    assert pi_pq(f, 0.0, 0.0) == pytest.approx(f.slice(0.0).total(), rel=1e-14)
    assert pi_pq(f, 0.5, 0.2) == pytest.approx(np.exp(-np.pi * 0.29), rel=1e-14)


# generic representations ------------------------------------------------------------

def test_gaussian_trace_and_hs_example():
    P = ModelParams(0.0)
    f = SchwartzFunction.gaussian(1)
    op = pi_r(P, f, 1.0, GRID)
    assert op.trace() == pytest.approx(1.0, rel=1e-10)
    assert trace_closed_form(P, f, 1.0) == pytest.approx(1.0, rel=1e-14)
    lhs, rhs = hs_norm_check(P, f, 1.0, GRID)
    assert rhs == pytest.approx(0.5, rel=1e-14)
    assert lhs == pytest.approx(0.5, rel=1e-10)


def test_zero_function_and_r_zero():
    P = ModelParams(0.5)
    op = pi_r(P, SchwartzFunction.zero(1), 1.0, GRID)
    assert np.all(op.kernel == 0)
    assert hs_norm_check(P, SchwartzFunction.gaussian(1), 0.2, GRID) == (0.0, 0.0)
    with pytest.raises(ValueError):
        pi_r(P, SchwartzFunction.gaussian(1), 0.0, GRID)
    with pytest.raises(ValueError):
        pi_r(ModelParams(0.0, 2), SchwartzFunction.gaussian(2), 1.0, GRID)


@pytest.mark.parametrize("lam", [0.0, 0.5])
def test_kernel_matches_dense_definition(lam):
    P = ModelParams(lam)
    f = chirped()
    r = 1.1
    eta = eta_lambda(P, r)
    g = f.slice(r)
    small = GridSpec(3.0, 24)
    u = small.nodes[:, 0]
    dense = dense_kernel_pi_r(lambda x, y: g(np.stack([x, np.full_like(x, y)], -1)), eta, u)
    K = pi_r(P, f, r, small, check_coverage=False).kernel
    assert np.abs(K - dense).max() <= 1e-9 * np.abs(dense).max()


@pytest.mark.parametrize("lam", [0.0, 0.5])
@pytest.mark.parametrize("r", [0.7, 1.0, 1.3])
def test_trace_formula_on_chirped_family(lam, r):
    P = ModelParams(lam)
    f = chirped()
    tr = pi_r(P, f, r, GRID).trace()
    ref = trace_closed_form(P, f, r)
    assert abs(tr - ref) <= 1e-4 * abs(ref)
    lhs, rhs = hs_norm_check(P, f, r, GRID)
    assert lhs == pytest.approx(rhs, rel=1e-4)


def test_small_box_warns():
    with pytest.warns(GridCoverageWarning):
        pi_r(ModelParams(0.0), SchwartzFunction.gaussian(1), 1.0, GridSpec(1.0, 16))


def test_no_warning_on_default_grid():
    with warnings.catch_warnings():
        warnings.simplefilter("error", GridCoverageWarning)
        pi_r(ModelParams(0.5), chirped(), 1.0, GRID)


def test_backends_give_same_operator():
    from heisenberg_orbits.kernels import available_backends
    ops = [pi_r(ModelParams(0.5), chirped(), 1.0, GRID, backend=b).kernel
           for b in available_backends()]
    for K in ops[1:]:
        assert np.abs(K - ops[0]).max() <= 1e-13


# extended algebra ----------------------------------------------------------------------

TF = TildeSchwartzFunction.gaussian(1, rbump=Bump(0.0, 2.0))


def _bump_w_integral(bump, s):
    lo, hi = bump.support
    re = integrate.quad(lambda w: bump(w) * np.cos(2 * np.pi * s * w), lo, hi, epsabs=1e-14)[0]
    im = integrate.quad(lambda w: -bump(w) * np.sin(2 * np.pi * s * w), lo, hi, epsabs=1e-14)[0]
    return re + 1j * im


@pytest.mark.parametrize("s", [0.0, 0.3, -1.2])
def test_pi_tilde_s_matches_quadrature(s):
    expect = 1.0 * _bump_w_integral(Bump(0.0, 1.0), s)  # Gaussian total is 1
    assert pi_tilde_s(TF, s) == pytest.approx(expect, rel=1e-10)
    assert pi_tilde_s(TildeSchwartzFunction.zero(1), s) == 0


def test_pi_tilde_pq_at_origin_is_s():
    L = limit_operators(ModelParams(0.0), TF, 0.3, GRID)
    S = pi_tilde_pq(TF, 0.0, 0.0, GRID)
    assert np.array_equal(S.kernel, L["S"].kernel)
    d = GRID.nodes[:, 0]
    assert np.allclose(S.kernel, np.ones_like(d)[:, None] * Bump(0, 1)(d[None, :] - d[:, None]))
    assert np.all(pi_tilde_pq(TildeSchwartzFunction.zero(1), 1, 1, GRID).kernel == 0)


@pytest.mark.parametrize("shift", [0.5, -1.3])
def test_translation_equivalence_of_pi_tilde_pq(shift):
    p, q = 0.7, -0.4
    d = np.linspace(-3, 3, 41)
    a = pi_tilde_pq_kernel(TF, p, q, d + shift, d + shift)
    b = pi_tilde_pq_kernel(TF, np.exp(shift) * p, np.exp(-shift) * q, d, d)
    assert np.abs(a - b).max() <= 1e-12


def _brute_tilde_rs(f, eta, r, s, u, v, ny=801, nw=400):
    """Kernel from the defining integral by tensor quadrature over (y, w)."""
    y = np.linspace(-8, 8, ny)
    hy = y[1] - y[0]
    w, ww = np.polynomial.legendre.leggauss(nw)
    t = f.terms[0]
    lo, hi = t.wbump.support
    w = lo + 0.5 * (hi - lo) * (w + 1)
    ww = 0.5 * (hi - lo) * ww
    out = 0j
    for wi, ci in zip(w, ww):
        x = np.exp(wi) * v - u
        vals = t.gauss(np.stack([np.full_like(y, x), y], -1))
        inner = np.sum(vals * np.exp(-2j * np.pi * eta * u * y)) * hy
        out += ci * t.wbump(wi) * t.rbump(r) * np.exp(-2j * np.pi * s * wi + 0.5 * wi) * inner
    return out


@pytest.mark.parametrize("lam", [0.0, 0.5])
def test_pi_tilde_rs_kernel_matches_definition(lam):
    P = ModelParams(lam)
    f = TildeSchwartzFunction.gaussian(1, np.array([[3.0, 0.4j], [0.4j, 2.5]]), [0.2, 0.1j],
                                       rbump=Bump(0.0, 2.0))
    r, s = 0.6, 0.3
    g = tilde_rs_kernel(P, f, r, s)
    eta = eta_lambda(P, r)
    for u, v in [(0.0, 0.0), (0.4, -0.3), (-1.0, 0.5)]:
        ref = _brute_tilde_rs(f, eta, r, s, u, v)
        assert g(np.array([[u, v]]))[0] == pytest.approx(ref, rel=1e-8, abs=1e-12)


def test_pi_tilde_rs_zero_and_errors():
    P = ModelParams(0.0)
    assert np.all(pi_tilde_rs(P, TildeSchwartzFunction.zero(1), 0.5, 0.1, GRID).kernel == 0)
    with pytest.raises(ValueError):
        pi_tilde_rs(P, TF, 0.0, 0.1, GRID)


def test_rs_kernel_converges_to_t():
    P = ModelParams(0.5)
    small = GridSpec(4.0, 48)
    T = tilde_rs_kernel(P, TF, 0.0, 0.3)
    Z = np.stack(np.meshgrid(small.nodes[:, 0], small.nodes[:, 0], indexing="ij"), -1)
    t_vals = T(Z)
    sup = []
    for k in range(1, 9):
        for sgn in (1, -1):
            r = sgn * 2.0 ** -k
            sup.append(np.abs(tilde_rs_kernel(P, TF, r, 0.3)(Z) - t_vals).max())
    pos, neg = sup[0::2], sup[1::2]
    assert all(a > b for a, b in zip(pos, pos[1:]))
    assert all(a > b for a, b in zip(neg, neg[1:]))
    assert pos[-1] < 1e-2 * pos[0]


def test_pi_pq_sequence_converges_monotonically_to_s():
    S = pi_tilde_pq(TF, 0.0, 0.0, GRID)
    seq = [pi_tilde_pq(TF, 2.0 ** -k, 2.0 ** -k, GRID).relative_hs_distance(S)
           for k in range(17)]
    assert all(a > b for a, b in zip(seq, seq[1:]))
    assert seq[-1] <= 1e-3 * seq[0]


def test_s_tilde_is_diagonal_with_pi_tilde_s_entries():
    _, s, C = s_tilde(TF, GridSpec(6.0, 128, "periodic"))
    dg = np.diag(C)
    assert np.linalg.norm(C - np.diag(dg)) <= 1e-3 * np.linalg.norm(dg)
    ref = np.array([pi_tilde_s(TF, -x) for x in s])
    assert np.abs(dg - ref).max() <= 1e-2 * np.abs(ref).max()


# F_r and Q_{r,s} ---------------------------------------------------------------------------

@pytest.mark.parametrize("lam", [0.0, 0.5])
@pytest.mark.parametrize("r", [0.25, -0.6, 1.0])
def test_f_r_is_unitary(lam, r):
    F, Fi = f_r_transform(ModelParams(lam), r, points=128)
    w = F.weights[None, :]
    I = np.eye(F.shape[0])
    assert np.abs((F @ Fi).kernel * w - I).max() <= 1e-8
    assert np.abs((F.adjoint() @ F).kernel * w - I).max() <= 1e-8


@pytest.mark.parametrize("r", [0.5, 0.9])
def test_f_r_maps_gaussian_to_scaled_gaussian(r):
    P = ModelParams(0.5)
    eta = eta_lambda(P, r)
    F, _ = f_r_transform(P, r, points=128)
    v = F.nodes[:, 0]
    out = F.apply(np.exp(-np.pi * v ** 2))
    assert np.abs(out - abs(eta) ** 0.5 * np.exp(-np.pi * eta ** 2 * v ** 2)).max() <= 1e-10


def test_f_r_warns_on_unmatched_grid():
    with pytest.warns(GridCoverageWarning):
        f_r_transform(ModelParams(0.0), 4.0, GRID)
    with pytest.raises(ValueError):
        f_r_transform(ModelParams(0.0), 0.0)


def test_q_rs_conjugation_matches_direct_kernel():
    conj, direct = q_rs(ModelParams(0.5), TF, 0.8, 0.3, points=128)
    assert conj.relative_hs_distance(direct) <= 1e-6


def test_fourier_grid_is_matched():
    g = fourier_grid(64, 2.5)
    x, _ = g.nodes_1d()
    h = x[1] - x[0]
    assert g.points * h * h * 2.5 == pytest.approx(1.0)


def test_limit_operators_shapes():
    L = limit_operators(ModelParams(0.0), TF, 0.3, GridSpec(6.0, 64))
    assert set(L) == {"S", "S_tilde", "T", "T_tilde", "Q"}
    assert all(op.shape == (64, 64) for op in L.values())


def test_gaussian_sum_used_by_representations_is_public():
    assert isinstance(partial_fourier(chirped()).slice(1.0), GaussianSum)
