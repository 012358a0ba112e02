"""Operator radii w_rho of complex matrices, K-spectral constant conversion
and desk-scale verification of the associated inequalities."""

__version__ = "0.1.0"

from .complexmat import (
    Tolerances,
    TOLERANCES,
    LinAlgError,
    NotHermitian,
    NoConvergence,
    Singular,
    DimensionOverflow,
    herm_eig,
    op_norm,
    inverse,
    kron,
    spectral_radius,
    real_part,
    poly_eval,
    mobius_factor_eval,
)
from .mobius import (
    Disc,
    MobiusMap,
    ConversionRecord,
    DomainError,
    ktilde_from_k,
    k_from_ktilde,
    disc_dk,
    homothety_alpha,
    disc_automorphism_b,
    drury_constant,
    conversion_record,
)
from .radii import (
    RadiusReport,
    RhoParams,
    SpectrumOnBoundary,
    numerical_radius,
    in_class_crho,
    w_rho,
    w_rho_variational,
)
