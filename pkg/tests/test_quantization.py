import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from heisenberg_orbits.functions import Bump, SchwartzFunction, random_gaussian_sum
from heisenberg_orbits.gaussian import GaussianSum
from heisenberg_orbits.grid import GridSpec
from heisenberg_orbits.groups import GroupElement, Kind, ModelParams, eta_lambda
from heisenberg_orbits.orbits import classify_orbit
from heisenberg_orbits.quantization import (OrbitFunction, PlancherelMeasure, TermOverflowError,
                                            intertwining_check, involution, moyal_involution,
                                            moyal_product, plancherel_check, q_map,
                                            regular_rep, restrict_to_orbit, twisted_multiply)
from heisenberg_orbits.representations import pi_r

GRID = GridSpec(6.0, 128)
BOX = np.linspace(-7, 7, 281)
H = BOX[1] - BOX[0]


def rand_f(seed, terms=2):
    rng = np.random.default_rng(seed)
    return SchwartzFunction.from_terms(1, [(random_gaussian_sum(rng, 2, terms), Bump(1.0, 0.5))])


def brute_twisted(f, g, eta, X, Y, r):
    """Defining integral on a tensor trapezoid grid (spectrally accurate for Gaussians)."""
    x, y = np.meshgrid(BOX, BOX, indexing="ij")
    fx = f.slice(r)(np.stack([x, y], -1))
    gx = g.slice(r)(np.stack([X - x, Y - y], -1))
    return np.sum(fx * gx * np.exp(-2j * np.pi * eta * x * (Y - y))) * H * H


def at(f, X, Y, r):
    return complex(f.slice(r)(np.array([X, Y])))


# twisted product -------------------------------------------------------------------

@pytest.mark.parametrize("lam", [0.0, 0.5])
def test_twisted_product_matches_definition(lam):
    P = ModelParams(lam)
    f, g = rand_f(1), rand_f(2)
    fg = twisted_multiply(P, f, g)
    for X, Y, r in [(0.0, 0.0, 1.0), (0.4, -0.3, 1.2), (-0.8, 0.5, 0.8)]:
        ref = brute_twisted(f, g, eta_lambda(P, r), X, Y, r)
        assert at(fg, X, Y, r) == pytest.approx(ref, rel=1e-10, abs=1e-14)


def test_classical_flag_is_convolution():
    f = SchwartzFunction.gaussian(1)
    conv = twisted_multiply(ModelParams(0.5), f, f, classical=True)
    # e^{-pi|z|^2} * e^{-pi|z|^2} = e^{-pi|z|^2/2} / 2 in two dimensions
    for X, Y in [(0, 0), (0.5, -1.0)]:
        expect = 0.5 * np.exp(-np.pi * (X * X + Y * Y) / 2) * Bump(1.0, 0.5)(1.1) ** 2
        assert at(conv, X, Y, 1.1) == pytest.approx(expect, rel=1e-13)
    g = rand_f(3)
    ref = brute_twisted(f, g, 0.0, 0.3, 0.2, 1.0)
    assert at(twisted_multiply(ModelParams(0.5), f, g, classical=True), 0.3, 0.2, 1.0) == \
        pytest.approx(ref, rel=1e-10)


def test_zero_factors_and_disjoint_supports():
    P = ModelParams(0.0)
    f = rand_f(4)
    assert at(twisted_multiply(P, f, SchwartzFunction.zero(1)), 0, 0, 1.0) == 0
    far = SchwartzFunction.gaussian(1, bump=Bump(5.0, 0.5))
    assert twisted_multiply(P, f, far).support == (0.0, 0.0)
    assert at(regular_rep(P, f, f), 0.1, 0.2, 1.0) == at(twisted_multiply(P, f, f), 0.1, 0.2, 1.0)


def test_term_cap_and_dimension_checks():
    P = ModelParams(0.0)
    f = rand_f(5, terms=3)
    with pytest.raises(TermOverflowError):
        twisted_multiply(P, f, f, max_terms=4).slice(1.0)
    with pytest.raises(ValueError):
        twisted_multiply(P, f, SchwartzFunction.gaussian(2))


@settings(max_examples=15)
@given(st.integers(0, 10 ** 6), st.sampled_from([0.0, 0.5, -0.5]))
def test_associativity_closed_form(seed, lam):
    P = ModelParams(lam)
    f, g, h = rand_f(seed, 1), rand_f(seed + 1, 1), rand_f(seed + 2, 1)
    a = twisted_multiply(P, twisted_multiply(P, f, g), h)
    b = twisted_multiply(P, f, twisted_multiply(P, g, h))
    z = np.random.default_rng(seed).uniform(-1, 1, (5, 2))
    va, vb = a.slice(1.1)(z), b.slice(1.1)(z)
    assert np.abs(va - vb).max() <= 1e-6 * max(np.abs(vb).max(), 1e-300)


def test_involution_definition_and_involutivity():
    P = ModelParams(0.5)
    f = rand_f(6)
    fs = involution(P, f)
    r = 1.1
    eta = eta_lambda(P, r)
    for x, y in [(0.2, -0.4), (-1.0, 0.3)]:
        expect = np.conj(at(f, -x, -y, r)) * np.exp(-2j * np.pi * eta * x * y)
        assert at(fs, x, y, r) == pytest.approx(expect, rel=1e-13)
        assert at(involution(P, fs), x, y, r) == pytest.approx(at(f, x, y, r), rel=1e-13)


def test_involution_is_antimultiplicative():
    P = ModelParams(0.5)
    f, g = rand_f(7), rand_f(8)
    lhs = involution(P, twisted_multiply(P, f, g))
    rhs = twisted_multiply(P, involution(P, g), involution(P, f))
    z = np.array([[0.1, 0.2], [-0.5, 0.4]])
    assert np.allclose(lhs.slice(1.0)(z), rhs.slice(1.0)(z), rtol=1e-10)


def test_real_even_gaussian_only_gains_the_phase():
    P = ModelParams(0.0)
    f = SchwartzFunction.gaussian(1)
    fs = involution(P, f)
    r = 1.2
    for x, y in [(0.3, 0.4), (1.0, -0.2)]:
        ratio = at(fs, x, y, r) / at(f, x, y, r)
        assert ratio == pytest.approx(np.exp(-2j * np.pi * r * x * y), rel=1e-13)


@pytest.mark.parametrize("lam", [0.0, 0.5])
def test_homomorphism_and_adjoint_on_grid(lam):
    P = ModelParams(lam)
    f, g = rand_f(9), rand_f(10)
    for r in (0.8, 1.2):
        prod = pi_r(P, twisted_multiply(P, f, g), r, GRID)
        comp = pi_r(P, f, r, GRID) @ pi_r(P, g, r, GRID)
        assert prod.relative_hs_distance(comp) <= 1e-3
        adj = pi_r(P, f, r, GRID).adjoint()
        assert pi_r(P, involution(P, f), r, GRID).relative_hs_distance(adj) <= 1e-3


# orbit functions and quantization -------------------------------------------------------

def orbit(r=1.0, lam=0.0):
    P = ModelParams(lam)
    return classify_orbit(P, GroupElement.from_parts(Kind.G, 1, r=r))


def point_orbit(p=0.5, q=-0.2):
    return classify_orbit(ModelParams(0.0), GroupElement.from_parts(Kind.G, 1, p=p, q=q))


def gauss_phi(A, b=None, r=1.0, lam=0.0):
    return OrbitFunction(orbit(r, lam), gauss=GaussianSum.single(A, b))


PHI = np.pi * np.eye(2)
PSI = np.pi * np.diag([1.0, 2.0])


def test_orbit_function_validation():
    with pytest.raises(ValueError):
        OrbitFunction(orbit())
    with pytest.raises(ValueError):
        OrbitFunction(point_orbit())
    two_d = classify_orbit(ModelParams(0.0), GroupElement(Kind.GTILDE, 1, [1, 1, 0, 0]))
    with pytest.raises(ValueError):
        OrbitFunction(two_d, value=1.0)


@pytest.mark.parametrize("lam", [0.0, 0.5])
def test_q_map_of_restriction_is_pi_r(lam):
    P = ModelParams(lam)
    f = rand_f(11)
    r = 1.1
    phi = restrict_to_orbit(P, f, orbit(r, lam))
    a = q_map(phi, GRID).kernel
    b = pi_r(P, f, r, GRID).kernel
    assert np.abs(a - b).max() <= 1e-12 * np.abs(b).max()


def test_q_map_isometry_and_zero():
    phi = gauss_phi(PHI, [0.2j, 0.1])
    op = q_map(phi, GRID)
    assert op.hs_norm_sq() == pytest.approx(phi.l2_norm_sq(), rel=1e-4)
    zero = OrbitFunction(orbit(), gauss=GaussianSum.zeros(2))
    assert np.all(q_map(zero, GRID).kernel == 0)
    with pytest.raises(ValueError):
        q_map(phi)


def test_point_orbit_quantization_is_scalar():
    f = SchwartzFunction.gaussian(1, bump=Bump(0.0, 1.0))
    po = point_orbit()
    phi = restrict_to_orbit(ModelParams(0.0), f, po)
    v = q_map(phi)
    assert isinstance(v, complex)
    assert v == pytest.approx(np.exp(-np.pi * (0.25 + 0.04)), rel=1e-14)


def test_moyal_point_case_and_zero():
    po = point_orbit()
    a, b = OrbitFunction(po, value=2 + 1j), OrbitFunction(po, value=0.5 - 3j)
    assert moyal_product(a, b).value == (2 + 1j) * (0.5 - 3j)
    assert moyal_involution(a).value == 2 - 1j
    phi = gauss_phi(PHI)
    zero = OrbitFunction(orbit(), gauss=GaussianSum.zeros(2))
    assert moyal_product(phi, zero).gauss.nterms == 0


def brute_moyal(phi, psi, eta, a, b):
    pt, xt = np.meshgrid(BOX, BOX, indexing="ij")
    f = phi.gauss(np.stack([pt, np.full_like(pt, b)], -1))
    g = psi.gauss(np.stack([np.full_like(pt, a), b + eta * xt], -1))
    return np.sum(f * g * np.exp(2j * np.pi * (pt - a) * xt)) * H * H


@pytest.mark.parametrize("lam", [0.0, 0.5])
def test_moyal_matches_definition(lam):
    phi = gauss_phi(PHI, [0.3j, 0.0], 1.0, lam)
    psi = gauss_phi(PSI, [0.0, -0.2], 1.0, lam)
    prod = moyal_product(phi, psi)
    for a, b in [(0.0, 0.0), (0.3, -0.5)]:
        ref = brute_moyal(phi, psi, phi.eta, a, b)
        assert prod(a, b) == pytest.approx(ref, rel=1e-10, abs=1e-14)


def test_moyal_homomorphism_adjoint_associativity():
    phi = gauss_phi(PHI, [0.3j, 0.1])
    psi = gauss_phi(PSI, [0.0, -0.2j])
    chi = gauss_phi(np.pi * np.diag([1.5, 0.8]), [0.1, 0.1])
    lhs = q_map(moyal_product(phi, psi), GRID)
    rhs = q_map(phi, GRID) @ q_map(psi, GRID)
    assert lhs.relative_hs_distance(rhs) <= 1e-3
    assert q_map(moyal_involution(psi), GRID).relative_hs_distance(q_map(psi, GRID).adjoint()) \
        <= 1e-3
    a = moyal_product(moyal_product(phi, psi), chi)
    b = moyal_product(phi, moyal_product(psi, chi))
    z = np.array([[0.0, 0.0], [0.4, -0.3]])
    assert np.abs(a.gauss(z) - b.gauss(z)).max() <= 1e-6 * np.abs(b.gauss(z)).max()
    back = moyal_involution(moyal_involution(psi))
    assert np.abs(back.gauss(z) - psi.gauss(z)).max() <= 1e-6


def test_moyal_argument_checks():
    phi = gauss_phi(PHI)
    with pytest.raises(ValueError):
        moyal_product(phi, gauss_phi(PHI, r=2.0))
    with pytest.raises(ValueError):
        moyal_product(phi, phi, hbar=0.0)
    with pytest.raises(ValueError):
        moyal_product(phi, phi, hbar=1.5)
    with pytest.raises(TermOverflowError):
        big = OrbitFunction(orbit(), gauss=sum([GaussianSum.single(PHI)] * 3,
                                               GaussianSum.zeros(2)))
        moyal_product(big, big, max_terms=4)


@pytest.mark.parametrize("lam", [0.0, 0.5])
def test_classical_limit_slope(lam):
    phi = OrbitFunction(orbit(1.0, lam), gauss=GaussianSum.isotropic(2))
    psi = OrbitFunction(orbit(1.0, lam),
                        gauss=GaussianSum.single(np.pi * np.diag([1.0, 2.0]), [0.5, -0.3]))
    a = np.linspace(-2, 2, 41)
    Z = np.stack(np.meshgrid(a, a, indexing="ij"), -1).reshape(-1, 2)
    hbars = [1 / 2, 1 / 4, 1 / 8, 1 / 16]
    errs = [np.abs(moyal_product(phi, psi, h).gauss(Z) - phi.gauss(Z) * psi.gauss(Z)).max()
            for h in hbars]
    slope = np.polyfit(np.log(hbars), np.log(errs), 1)[0]
    assert slope >= 0.9


# Plancherel and intertwining ------------------------------------------------------------

def test_plancherel_zero():
    res = plancherel_check(ModelParams(0.0), SchwartzFunction.zero(1), grid=GRID)
    assert (res.lhs, res.rhs_closed, res.rhs_grid) == (0.0, 0.0, 0.0)


def test_plancherel_gaussian_bump():
    P = ModelParams(0.0)
    f = SchwartzFunction.gaussian(1)
    res = plancherel_check(P, f, m=32, grid=GRID)
    b = Bump(1.0, 0.5)
    lhs = 0.5 * integrate.quad(lambda r: b(r) ** 2, 0.5, 1.5, epsabs=1e-15, limit=200)[0]
    assert res.lhs == pytest.approx(lhs, rel=1e-10)
    assert res.closed_residual <= 1e-6
    assert res.grid_residual <= 1e-3


@pytest.mark.parametrize("lam", [0.0, 0.5])
def test_plancherel_random_function(lam):
    res = plancherel_check(ModelParams(lam), rand_f(12), m=32)
    assert res.rhs_grid is None and res.closed_residual <= 1e-6


def test_plancherel_r_refinement():
    P = ModelParams(0.5)
    f = rand_f(13)
    res = [plancherel_check(P, f, m).closed_residual for m in (4, 8, 16, 32)]
    floor = 1e-12
    for a, b in zip(res, res[1:]):
        assert b <= 0.5 * a or b <= floor


def test_plancherel_measure_density():
    meas = PlancherelMeasure(ModelParams(0.5, 2), 0.5, 1.5, 8)
    assert meas.density(1.0) == pytest.approx((np.e - 1) ** 2)
    assert meas.weights.sum() == pytest.approx(
        integrate.quad(lambda r: (np.expm1(r)) ** 2, 0.5, 1.5)[0], rel=1e-10)


def test_intertwining():
    P = ModelParams(0.5)
    f, xi = rand_f(14), rand_f(15)
    rs = np.linspace(0.6, 1.4, 8)
    assert intertwining_check(P, SchwartzFunction.zero(1), xi, rs, GRID) == 0.0
    assert intertwining_check(P, f, xi, rs, GRID) <= 1e-3
    coarse = [intertwining_check(P, f, xi, [1.0], g) for g in GRID.ladder(3)]
    assert coarse[-1] < coarse[0]
