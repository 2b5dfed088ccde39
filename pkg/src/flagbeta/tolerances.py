"""Centralized tolerance profiles for the verification harness.

Every numeric acceptance threshold lives here; check code never hard-codes
one.  The default profile pins the documented desk-scale tolerances; strict
tightens everything that has headroom.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["Tolerances", "PROFILES"]


@dataclass(frozen=True)
class Tolerances:
    # scalar algebra properties
    scalar_property_rel: float = 1e-12
    scalar_inverse_rel: float = 1e-14
    # matrix identity checks
    fit_vs_block_rel: float = 1e-10
    lemma_identity_rel: float = 1e-9
    qdet_rel: float = 1e-8
    det_commutative_rel: float = 1e-10
    dj_rel: float = 1e-9
    # quadrature comparisons
    scalar_lemma_rel: float = 1e-7
    n2_quadrature_rel: float = 1e-6
    n3_quadrature_rel: float = 1e-5
    pushforward_const_rel: float = 1e-5
    hua1_rel: float = 1e-6
    hua2_rel: float = 1e-5
    boundary_rel: float = 1e-4
    closed_form_identity_rel: float = 1e-12
    # statistical acceptance
    mc_z_max: float = 4.0
    boundary_z_max: float = 6.0
    two_sample_alpha: float = 0.01
    two_sample_seeds: int = 20
    two_sample_max_failures: int = 2
    # reproducibility / round trips
    log_density_abs: float = 1e-10


PROFILES = {
    "default": Tolerances(),
    "strict": Tolerances(
        fit_vs_block_rel=1e-11,
        lemma_identity_rel=1e-10,
        qdet_rel=1e-9,
        det_commutative_rel=1e-11,
        dj_rel=1e-10,
        scalar_lemma_rel=1e-8,
        n2_quadrature_rel=1e-7,
        mc_z_max=3.5,
        two_sample_max_failures=1,
    ),
}
