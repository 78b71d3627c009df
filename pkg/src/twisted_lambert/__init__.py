"""High-precision verification of an exact formula for twisted Lambert series.

The Lambert series ``sum (a_f psi * mu psi')(n) e^{-ny}`` of a cusp form
``f`` twisted by Dirichlet characters is evaluated directly and through a
hypergeometric series plus a sum over the nontrivial zeros of
``L(s, psi')``.
"""

__version__ = "0.1.0"

from .characters import (
    ConvolvedSequence,
    DirichletCharacter,
    all_characters,
    build_character,
    mobius_sieve,
    mu_k,
    principal_character,
    quadratic_character,
    twisted_convolve,
)
from .cuspforms import CuspFormData, delta_form, export_coefficients, load_coefficients, ramanujan_tau
from .errors import *  # noqa: F401,F403
from .identity import IdentityConfig, LambertIdentity, VerificationReport, YRecord, verify_identity
from .lfunctions import (
    CuspFormLSeries,
    DirichletLSeries,
    completed_xi,
    dirichlet_L,
    dirichlet_L_deriv,
    hardy_z,
    lambda_f,
)
from .precision import DEFAULT_CONTEXT, PrecisionContext
from .zeros import LZero, bracket, export_zeros, find_zeros, first_zeros, import_zeros
