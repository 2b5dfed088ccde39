"""Samplers: exactness, projective consistency, importance estimation."""

import numpy as np
import pytest
from scipy.stats import kstest

from flagbeta.batched import log_corner_gram
from flagbeta.closedform import CornerExponents, DivergenceError
from flagbeta.fields import Field, Scalar
from flagbeta.matrices import UnitriangularMatrix, quad_coeffs
from flagbeta.sampling import (FlagMeasure, conditional_entry_sample,
                               default_proposal, importance_estimate, project,
                               sample_flag, sample_flags, student_t_sample,
                               worker_rng, _student_t_batch)
from flagbeta.stats import radial_cdf, radial_ks_pvalue

R, C, H = Field.REAL, Field.COMPLEX, Field.QUATERNION


# -- student-t scalar draws ---------------------------------------------------

def test_cauchy_case():
    rng = np.random.default_rng(5)
    w = _student_t_batch(1.0, 1, rng, 1_000_000)[:, 0]
    n = w.size
    # median 0 and F(1) = 3/4 within 4 sigma of the binomial fluctuations
    assert abs(np.mean(w <= 0.0) - 0.5) < 4 * 0.5 / np.sqrt(n)
    assert abs(np.mean(w <= 1.0) - 0.75) < 4 * np.sqrt(0.75 * 0.25 / n)


def test_complex_radial_median():
    rng = np.random.default_rng(6)
    w = _student_t_batch(2.0, 2, rng, 500_000)
    r2 = np.sum(w[:, :2] ** 2, axis=1)
    n = r2.size
    assert abs(np.mean(r2 <= 1.0) - 0.5) < 4 * 0.5 / np.sqrt(n)


def test_moment_existence_switch():
    rng = np.random.default_rng(7)
    # dof = 2 nu - kappa = 5: E|W|^2 = kappa/(dof-2)
    kappa, nu = 2, 3.5
    w = _student_t_batch(nu, kappa, rng, 400_000)
    r2 = np.sum(w[:, :kappa] ** 2, axis=1)
    expected = kappa / (2 * nu - kappa - 2)
    stderr = r2.std() / np.sqrt(r2.size)
    assert abs(r2.mean() - expected) < 5 * stderr
    # dof = 1.5 < 2: second moment diverges; a single draw dominates the sum
    w = _student_t_batch((1.5 + 1) / 2, 1, rng, 400_000)[:, 0]
    contrib = np.sort(w ** 2)
    assert contrib[-1] / contrib.sum() > 0.05


def test_student_t_requires_valid_exponent():
    rng = np.random.default_rng(8)
    with pytest.raises(DivergenceError):
        student_t_sample(0.5, R, rng)
    s = student_t_sample(2.5, H, rng)
    assert s.components.shape == (4,)


@pytest.mark.parametrize("field,nu", [(R, 1.0), (R, 2.2), (C, 2.0),
                                      (H, 2.8)])
def test_radial_law_ks_over_seeds(field, nu):
    failures = 0
    for seed in range(20):
        rng = np.random.default_rng(1000 + seed)
        w = _student_t_batch(nu, field.kappa, rng, 20_000)
        p = radial_ks_pvalue(w, field.kappa, nu)
        if p <= 0.01:
            failures += 1
    assert failures <= 2


def test_radial_cdf_values():
    # P(|w|^2 <= 1) = 1/2 for kappa=2, nu=2
    assert abs(radial_cdf(np.array([1.0]), 2, 2.0)[0] - 0.5) < 1e-12


# -- conditional entry draws --------------------------------------------------

def test_conditional_reduces_to_student_t():
    z = UnitriangularMatrix.identity(2, R)
    u1 = conditional_entry_sample(z, 1, 1.0, np.random.default_rng(42))
    w1 = student_t_sample(1.0, R, np.random.default_rng(42))
    assert np.allclose(u1.components, w1.components)


def test_conditional_center():
    rng = np.random.default_rng(9)
    z = UnitriangularMatrix.identity(3, C)
    z.set_entry(1, 2, Scalar.of(C, 0.8, -0.3))
    z.set_entry(1, 3, Scalar.of(C, -0.5, 0.4))
    nu = 4.0
    coeffs = quad_coeffs(z, 2)
    center = -coeffs.b.components / coeffs.a
    draws = np.stack([conditional_entry_sample(z, 2, nu, rng).components
                      for _ in range(4000)])
    stderr = draws.std(axis=0) / np.sqrt(len(draws))
    assert np.all(np.abs(draws.mean(axis=0) - center)
                  < 5 * stderr + 1e-12)


def test_conditional_density_slope():
    # sampled entries follow the corner statistic power law: the log of the
    # empirical density regressed on the log target has unit slope
    rng = np.random.default_rng(10)
    z = UnitriangularMatrix.identity(3, R)
    z.set_entry(1, 2, Scalar.of(R, 0.9))
    z.set_entry(1, 3, Scalar.of(R, -0.6))
    nu = 2.5
    coeffs = quad_coeffs(z, 2)
    w = _student_t_batch(nu, 1, rng, 1_000_000)[:, 0]
    u = -coeffs.b.components[0] / coeffs.a \
        + np.sqrt(coeffs.discriminant) / coeffs.a * w

    lo, hi = np.quantile(u, [0.02, 0.98])
    counts, edges = np.histogram(u, bins=120, range=(lo, hi))
    centers = 0.5 * (edges[1:] + edges[:-1])
    width = edges[1] - edges[0]
    keep = counts > 200
    emp_log = np.log(counts[keep] / (u.size * width))
    target_log = -nu * np.log(coeffs.a * centers[keep] ** 2
                              + 2 * coeffs.b.components[0] * centers[keep]
                              + coeffs.c)
    slope = np.polyfit(target_log, emp_log, 1)[0]
    assert abs(slope - 1.0) < 0.01


# -- whole-matrix sampling ----------------------------------------------------

def test_measure_validation():
    FlagMeasure(3, R, (2.0, 2.0))
    with pytest.raises(DivergenceError):
        FlagMeasure(3, R, (0.2, 10.0))  # order-2 marginal not integrable
    with pytest.raises(DivergenceError):
        FlagMeasure(2, C, (1.0,))
    with pytest.raises(ValueError):
        FlagMeasure(3, R, (2.0,))


def test_entry_exponent_formula():
    m = FlagMeasure(4, C, (3.0, 4.0, 5.0))
    # nu_pq = lam_p + ... + lam_{q-1} - (q-1-p) kappa/2
    assert m.entry_exponent(1, 2) == 3.0
    assert m.entry_exponent(1, 4) == 3.0 + 4.0 + 5.0 - 2.0
    assert m.entry_exponent(2, 4) == 4.0 + 5.0 - 1.0
    assert m.entry_exponent(3, 4) == 5.0


def test_single_path_n2_is_cauchy():
    rng = np.random.default_rng(11)
    m = FlagMeasure(2, R, (1.0,))
    draws = np.array([sample_flag(m, rng).matrix.entry(1, 2).real
                      for _ in range(8000)])
    # arctan transform of a standard Cauchy is uniform
    u = np.arctan(draws) / np.pi + 0.5
    assert kstest(u, "uniform").pvalue > 0.001


def test_single_path_log_density():
    rng = np.random.default_rng(12)
    m = FlagMeasure(3, C, (3.0, 3.0))
    s = sample_flag(m, rng)
    z = s.matrix
    from flagbeta.matrices import log_corner_gram_det
    recomputed = -(3.0 * log_corner_gram_det(z, 1, 3)
                   + 3.0 * log_corner_gram_det(z, 2, 3))
    assert abs(s.log_density - recomputed) < 1e-10


def test_batch_matches_radial_law_n2():
    m = FlagMeasure(2, H, (3.0,))
    batch = sample_flags(m, 50_000, seed=21)
    w = batch.components[:, 0, 1, :]
    assert radial_ks_pvalue(w, 4, 3.0) > 0.001


def test_batch_log_density_recompute():
    m = FlagMeasure(4, R, (2.0, 2.0, 2.0))
    batch = sample_flags(m, 5000, seed=22)
    assert np.max(np.abs(batch.log_density
                         - batch.recomputed_log_density())) < 1e-10


def test_batch_determinism_and_worker_streams():
    m = FlagMeasure(3, C, (3.0, 3.0))
    b1 = sample_flags(m, 4000, seed=23, workers=2)
    b2 = sample_flags(m, 4000, seed=23, workers=2)
    assert np.array_equal(b1.components, b2.components)
    b3 = sample_flags(m, 4000, seed=23, workers=1)
    assert not np.array_equal(b1.components, b3.components)
    # worker partition is deterministic: first chunk of a 2-worker run equals
    # a direct single-worker run of the same stream
    half = sample_flags(m, 2000, seed=23, workers=1)
    assert np.array_equal(b1.components[:2000], half.components)


def test_projection_preserves_leading_block():
    rng = np.random.default_rng(13)
    z = UnitriangularMatrix.random(4, H, rng)
    zp = project(z)
    assert zp.order == 3
    assert np.array_equal(zp.components, z.components[:3, :3])
    one = UnitriangularMatrix.identity(1, R)
    with pytest.raises(ValueError):
        project(one)


def test_cross_estimator_agreement():
    # E[log s_13] under the normalized order-3 measure: direct sampling vs
    # self-normalized importance sampling from a different column measure
    m = FlagMeasure(3, R, (2.0, 2.0))
    batch = sample_flags(m, 200_000, seed=24)
    direct = log_corner_gram(batch.components, R, 1, 3)
    mean_direct = direct.mean()
    se_direct = direct.std() / np.sqrt(direct.size)

    prop = FlagMeasure(3, R, (3.0, 3.0))
    pbatch = sample_flags(prop, 200_000, seed=25)
    log_s13 = log_corner_gram(pbatch.components, R, 1, 3)
    log_s23 = log_corner_gram(pbatch.components, R, 2, 3)
    log_w = -(2.0 - 3.0) * log_s13 - (2.0 - 3.0) * log_s23
    w = np.exp(log_w - log_w.max())
    est = np.sum(w * log_s13) / np.sum(w)
    # rough stderr for the ratio estimator
    resid = w * (log_s13 - est)
    se_is = np.sqrt(np.sum(resid ** 2)) / np.sum(w)
    assert abs(mean_direct - est) < 4 * np.hypot(se_direct, se_is)


# -- importance estimation ----------------------------------------------------

def test_is_estimate_n2_pi():
    lam = CornerExponents.column(2, [1.0])
    prop = FlagMeasure(2, R, (1.3,))
    est = importance_estimate(lam, prop, 400_000, seed=26)
    assert est.z_score(np.pi) < 4.0


def test_is_estimate_matches_closed_form_n3():
    from flagbeta.closedform import log_flag_integral
    lam = CornerExponents.uniform(3, 2.0)
    est = importance_estimate(lam, default_proposal(lam, R), 400_000, seed=27)
    expected = float(np.exp(log_flag_integral(lam, R)).real)
    assert est.z_score(expected) < 4.0


def test_is_estimate_column_target_is_exact():
    from flagbeta.closedform import telescoped_log_constant
    lam = CornerExponents.column(3, [3.0, 3.0])
    prop = default_proposal(lam, C)
    assert prop.lam == (3.0, 3.0)
    est = importance_estimate(lam, prop, 1000, seed=28)
    assert est.stderr == 0.0
    expected = float(np.exp(telescoped_log_constant([3.0, 3.0], C)).real)
    assert abs(complex(est.mean).real - expected) < 1e-12 * expected


def test_is_estimate_rejects_divergent_target():
    lam = CornerExponents.column(2, [0.4])
    with pytest.raises(DivergenceError):
        importance_estimate(lam, FlagMeasure(2, R, (1.0,)), 1000, seed=29)


def test_default_proposal_clipping():
    lam = CornerExponents.column(3, [0.2, 10.0])  # invalid as-is over R
    prop = default_proposal(lam, R)
    assert prop.lam[0] >= 0.75
    lam_ok = CornerExponents.uniform(3, 2.0)
    prop_ok = default_proposal(lam_ok, R)
    assert prop_ok.lam == (4.0, 2.0)


def test_two_proposals_agree():
    lam = CornerExponents.uniform(3, 2.0)
    e1 = importance_estimate(lam, FlagMeasure(3, R, (4.0, 2.0)), 200_000,
                             seed=30)
    e2 = importance_estimate(lam, FlagMeasure(3, R, (3.0, 2.5)), 200_000,
                             seed=31)
    joint = np.hypot(e1.stderr, e2.stderr)
    assert abs(complex(e1.mean).real - complex(e2.mean).real) < 5 * joint


def test_worker_rng_is_counter_based():
    g = worker_rng(123, 0)
    assert "Philox" in type(g.bit_generator).__name__
