"""Numerics for small and large values of quadratic L-functions and Dedekind zeta."""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .errors import ConvergenceError, DomainError
from .special import (W2, ContourSpec, const_c5, const_c6, const_c20, const_c21, gamma_m,
                      riemann_zeta, stieltjes_constant)
from .arith import enumerate_8d_family, enumerate_fundamental, is_fundamental, kronecker
from .analytic import eta_closed_form_1, eta_product, identity_suite, residue_lemma
from .lfunc import L_direct, L_half_square, L_twisted_exp, dedekind_quadratic, sono_M
from .resonator import ResonatorSpec, moment_report, scan_min_L
from .fields import (build_inert_polynomial, find_split_primes, northcott_enumerate,
                     zeta_field_sigma, zeta_neg_line)
from .randeuler import RandomEulerSpec, empirical_density, mc_tail, sample_random_euler

__all__ = [
    "__version__", "BACKEND", "ConvergenceError", "DomainError",
    "W2", "ContourSpec", "const_c5", "const_c6", "const_c20", "const_c21", "gamma_m",
    "riemann_zeta", "stieltjes_constant",
    "enumerate_8d_family", "enumerate_fundamental", "is_fundamental", "kronecker",
    "eta_closed_form_1", "eta_product", "identity_suite", "residue_lemma",
    "L_direct", "L_half_square", "L_twisted_exp", "dedekind_quadratic", "sono_M",
    "ResonatorSpec", "moment_report", "scan_min_L",
    "build_inert_polynomial", "find_split_primes", "northcott_enumerate",
    "zeta_field_sigma", "zeta_neg_line",
    "RandomEulerSpec", "empirical_density", "mc_tail", "sample_random_euler",
]
