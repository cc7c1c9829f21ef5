"""Numerics for the quantum Heisenberg group algebras, their dressing orbits,
irreducible representations, orbit quantization and Plancherel formula.
"""
from .groups import (GroupElement, Kind, ModelParams, embed, eta_lambda, factorize, identity,
                     inverse, mul)
from .orbits import (GridCoverageWarning, Orbit, OrbitKind, SymplecticFourier, b_matrix,
                     canonical_measures, classify_orbit, dressing_g, dressing_gt,
                     dressing_via_double, infinitesimal_dressing, omega, orbit_trace,
                     poisson_bracket, stabilizer_basis)
from .gaussian import DivergentIntegralError, GaussianSum
from .grid import GridOperator, GridSpec
from .functions import Bump, SchwartzFunction, TildeSchwartzFunction, random_gaussian_sum
from .kernels import BACKEND
from .representations import (f_r_transform, hs_norm_check, limit_operators, partial_fourier,
                              pi_pq, pi_r, pi_tilde_pq, pi_tilde_rs, pi_tilde_s)
from .quantization import (OrbitFunction, PlancherelMeasure, TermOverflowError,
                           intertwining_check, involution, moyal_involution, moyal_product,
                           plancherel_check, q_map, regular_rep, restrict_to_orbit,
                           twisted_multiply)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Bump", "DivergentIntegralError", "GaussianSum", "GridCoverageWarning",
    "GridOperator", "GridSpec", "GroupElement", "Kind", "ModelParams", "Orbit", "OrbitFunction",
    "OrbitKind", "PlancherelMeasure", "SchwartzFunction", "SymplecticFourier",
    "TermOverflowError", "TildeSchwartzFunction", "b_matrix", "canonical_measures",
    "classify_orbit", "dressing_g", "dressing_gt", "dressing_via_double", "embed", "eta_lambda",
    "f_r_transform", "factorize", "hs_norm_check", "identity", "infinitesimal_dressing",
    "intertwining_check", "inverse", "involution", "limit_operators", "moyal_involution",
    "moyal_product", "mul", "omega", "orbit_trace", "partial_fourier", "pi_pq", "pi_r",
    "pi_tilde_pq", "pi_tilde_rs", "pi_tilde_s", "plancherel_check", "poisson_bracket",
    "q_map", "random_gaussian_sum", "regular_rep", "restrict_to_orbit", "stabilizer_basis",
    "twisted_multiply",
]
