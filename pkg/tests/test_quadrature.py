"""Oracle quadrature: exact values, convergence, divergence escalation."""

import numpy as np
import pytest
from scipy.special import gammaln

from flagbeta.quadrature import (OracleFailure, integrate_halfline,
                                 integrate_lines, integrate_radial,
                                 sphere_area)


def arctan_integrand(x):
    return np.exp(-np.log1p(x[:, 0] ** 2))


def test_arctan_integral():
    v = integrate_lines(arctan_integrand, 1, rel_tol=1e-10)
    assert abs(v - np.pi) < 1e-10 * np.pi


def test_complex_plane_integral():
    # (1+|z|^2)^-2 over C equals pi (radial reduction: pi G(1)/G(2))
    v = integrate_lines(
        lambda x: np.exp(-2.0 * np.log1p(x[:, 0] ** 2 + x[:, 1] ** 2)), 2,
        rel_tol=1e-8)
    assert abs(v - np.pi) < 1e-8 * np.pi


def test_radial_matches_full_for_quaternion_case():
    v = integrate_radial(lambda r: np.exp(-3.0 * np.log1p(r * r)), 4,
                         rel_tol=1e-9)
    assert abs(v - np.pi ** 2 / 2) < 1e-8 * np.pi ** 2 / 2


def test_sphere_areas():
    assert abs(sphere_area(1) - 2.0) < 1e-14
    assert abs(sphere_area(2) - 2 * np.pi) < 1e-13
    assert abs(sphere_area(4) - 2 * np.pi ** 2) < 1e-13


def test_halfline_gaussian():
    v = integrate_halfline(lambda r: np.exp(-r * r), rel_tol=1e-12)
    assert abs(v - np.sqrt(np.pi) / 2) < 1e-11


def test_gaussian_line():
    v = integrate_lines(lambda x: np.exp(-x[:, 0] ** 2), 1, rel_tol=1e-12)
    assert abs(v - np.sqrt(np.pi)) < 1e-11


@pytest.mark.parametrize("kappa", [1, 2, 4])
def test_boundary_convergent_side(kappa):
    lam = kappa / 2 + 0.05
    v = integrate_radial(lambda r: np.exp(-lam * np.log1p(r * r)), kappa,
                         rel_tol=1e-6)
    exact = np.exp(kappa / 2 * np.log(np.pi) + gammaln(lam - kappa / 2)
                   - gammaln(lam))
    assert abs(v - exact) < 1e-6 * exact


@pytest.mark.parametrize("kappa", [1, 2, 4])
def test_boundary_divergent_side_escalates(kappa):
    lam = kappa / 2 - 0.05
    with pytest.raises(OracleFailure):
        integrate_radial(lambda r: np.exp(-lam * np.log1p(r * r)), kappa,
                         rel_tol=1e-6)


def test_threshold_log_divergence_escalates():
    with pytest.raises(OracleFailure):
        integrate_radial(lambda r: np.exp(-0.5 * np.log1p(r * r)), 1,
                         rel_tol=1e-6)


def test_nonfinite_integrand_escalates():
    with pytest.raises(OracleFailure):
        integrate_lines(lambda x: np.full(x.shape[0], np.nan), 1)


def test_dims_validation():
    with pytest.raises(ValueError):
        integrate_lines(arctan_integrand, 5)


def test_student_t_normalization_all_kappa():
    # int (1+|w|^2)^-nu over R^kappa = pi^(kappa/2) G(nu-kappa/2)/G(nu)
    for kappa, nu in ((1, 1.7), (2, 2.4), (4, 3.1)):
        v = integrate_radial(lambda r: np.exp(-nu * np.log1p(r * r)), kappa,
                             rel_tol=1e-10)
        exact = np.exp(kappa / 2 * np.log(np.pi)
                       + gammaln(nu - kappa / 2) - gammaln(nu))
        assert abs(v - exact) < 1e-9 * exact
