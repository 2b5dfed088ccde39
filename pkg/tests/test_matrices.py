"""Matrix layer: corners, Gram statistics, determinants, Schur, coefficients."""

import numpy as np
import pytest

from flagbeta.fields import Field, FieldMismatchError, Scalar
from flagbeta.matrices import (IllConditionedWarning, KMatrix, QuadCoeffs,
                               SingularBlockError, UnitriangularMatrix,
                               corner, corner_gram_det,
                               desnanot_jacobi_check, desnanot_jacobi_residual,
                               det_commutative, dieudonne_det, fit_quad_coeffs,
                               gram, log_corner_gram_det, quad_coeffs,
                               schur_complement)

ALL_FIELDS = [Field.REAL, Field.COMPLEX, Field.QUATERNION]


def rng_for(name):
    return np.random.default_rng(abs(hash(name)) % 2 ** 32)


# -- corners and Gram --------------------------------------------------------

def test_corner_of_identity():
    z = UnitriangularMatrix.identity(3, Field.REAL)
    c = corner(z, 1, 3)
    assert c.shape == (1, 3)
    assert np.allclose(c.components[..., 0], [[1.0, 0.0, 0.0]])


def test_corner_unit_diagonal_and_direct_read():
    rng = rng_for("corner")
    z = UnitriangularMatrix.random(4, Field.COMPLEX, rng)
    c = corner(z, 2, 4)
    for k in range(2):
        assert c.entry(k, k).real == 1.0
    x = Scalar.of(Field.REAL, 0.0)
    z3 = UnitriangularMatrix.identity(3, Field.REAL)
    z3.set_entry(1, 2, Scalar.of(Field.REAL, 2.5))
    c12 = corner(z3, 1, 2)
    assert np.allclose(c12.components[0, :, 0], [1.0, 2.5])
    with pytest.raises(ValueError):
        corner(z3, 2, 2)
    del x


def test_gram_small_cases():
    m = KMatrix.from_real([[1.0, 0.0, 0.0]])
    g = gram(m)
    assert g.shape == (1, 1)
    assert g.entry(0, 0).real == 1.0
    z = KMatrix.from_complex([[1.0, 0.5 + 0.5j]])
    g2 = gram(z)
    assert abs(g2.entry(0, 0).real - 1.5) < 1e-15


@pytest.mark.parametrize("field", ALL_FIELDS)
def test_gram_hermitian(field):
    rng = rng_for(f"gram-{field.value}")
    m = KMatrix.random(3, 5, field, rng)
    g = gram(m)
    gt = g.conj_transpose()
    assert np.allclose(g.components, gt.components, atol=1e-13)


# -- determinants -------------------------------------------------------------

def test_det_commutative_basics():
    assert det_commutative(KMatrix.identity(3, Field.REAL)).real == 1.0
    d = KMatrix.from_real(np.diag([2.0, 3.0]))
    assert abs(det_commutative(d).real - 6.0) < 1e-14
    with pytest.raises(FieldMismatchError):
        det_commutative(KMatrix.identity(2, Field.QUATERNION))


def test_det_multiplicative_complex():
    rng = rng_for("detc")
    for _ in range(50):
        a = KMatrix.random(4, 4, Field.COMPLEX, rng)
        b = KMatrix.random(4, 4, Field.COMPLEX, rng)
        lhs = det_commutative(a @ b).to_complex()
        rhs = det_commutative(a).to_complex() * det_commutative(b).to_complex()
        assert abs(lhs - rhs) <= 1e-10 * max(abs(rhs), 1.0)


def test_dieudonne_diagonal_and_unitriangular():
    rng = rng_for("qdet")
    qs = rng.standard_normal((3, 4))
    comps = np.zeros((3, 3, 4))
    comps[np.arange(3), np.arange(3), :] = qs
    m = KMatrix(comps, Field.QUATERNION)
    expected = np.prod(np.sqrt((qs ** 2).sum(axis=1)))
    assert abs(dieudonne_det(m) - expected) < 1e-12 * expected
    z = UnitriangularMatrix.random(4, Field.QUATERNION, rng)
    assert abs(dieudonne_det(z.as_kmatrix()) - 1.0) < 1e-12


def test_dieudonne_multiplicative_quaternion():
    rng = rng_for("qdet-mult")
    for _ in range(100):
        a = KMatrix.random(3, 3, Field.QUATERNION, rng)
        b = KMatrix.random(3, 3, Field.QUATERNION, rng)
        lhs = dieudonne_det(a @ b)
        rhs = dieudonne_det(a) * dieudonne_det(b)
        assert abs(lhs - rhs) <= 1e-8 * max(rhs, 1e-6)


@pytest.mark.parametrize("field", [Field.REAL, Field.COMPLEX])
def test_dieudonne_matches_abs_det(field):
    rng = rng_for(f"qdet-abs-{field.value}")
    for _ in range(100):
        a = KMatrix.random(4, 4, field, rng)
        assert abs(dieudonne_det(a) - det_commutative(a).norm()) \
            <= 1e-10 * max(1.0, det_commutative(a).norm())


# -- corner-Gram statistic ----------------------------------------------------

def test_corner_stat_identity_matrix():
    for field in ALL_FIELDS:
        z = UnitriangularMatrix.identity(4, field)
        for p in range(1, 4):
            for q in range(p + 1, 5):
                assert abs(corner_gram_det(z, p, q) - 1.0) < 1e-14


def test_corner_stat_n2_formula():
    for field in ALL_FIELDS:
        rng = rng_for(f"spq-{field.value}")
        z = UnitriangularMatrix.random(2, field, rng)
        z12 = z.entry(1, 2)
        assert abs(corner_gram_det(z, 1, 2) - (1.0 + z12.abs2())) < 1e-12


def test_corner_stat_positive_quaternion():
    rng = rng_for("spq-pos")
    for _ in range(50):
        z = UnitriangularMatrix.random(5, Field.QUATERNION, rng, scale=2.0)
        for p in range(1, 5):
            for q in range(p + 1, 6):
                assert corner_gram_det(z, p, q) > 0.0


def test_corner_stat_boundary_conventions():
    z = UnitriangularMatrix.random(3, Field.REAL, rng_for("bdry"))
    assert corner_gram_det(z, 0, 2) == 1.0
    assert corner_gram_det(z, 2, 2) == 1.0
    assert log_corner_gram_det(z, 0, 3) == 0.0


# -- Schur complement ---------------------------------------------------------

def test_schur_identity_and_scalar_case():
    m = KMatrix.identity(4, Field.COMPLEX)
    sc = schur_complement(m, 2)
    assert np.allclose(sc.components, KMatrix.identity(2,
                                                       Field.COMPLEX).components)
    a, b, c = 2.0, 0.7, 1.5
    m2 = KMatrix.from_real([[a, b], [b, c]])
    sc2 = schur_complement(m2, 1)
    assert abs(sc2.entry(0, 0).real - (c - b * b / a)) < 1e-14


def test_schur_determinant_factorization_quaternion():
    rng = rng_for("schur")
    for _ in range(100):
        x = KMatrix.random(3, 5, Field.QUATERNION, rng)
        m = gram(x)
        sc = schur_complement(m, 1)
        lhs = dieudonne_det(m)
        rhs = dieudonne_det(m.block(0, 1, 0, 1)) * dieudonne_det(sc)
        assert abs(lhs - rhs) <= 1e-8 * max(rhs, 1e-8)


def test_schur_singular_block_error():
    m = KMatrix.from_real([[0.0, 1.0], [1.0, 0.0]])
    with pytest.raises(SingularBlockError):
        with pytest.warns(IllConditionedWarning):
            schur_complement(m, 1)


# -- quadratic coefficients ---------------------------------------------------

def test_quad_coeffs_trivial():
    z = UnitriangularMatrix.identity(2, Field.REAL)
    qc = quad_coeffs(z, 1)
    assert (qc.a, qc.c) == (1.0, 1.0)
    assert qc.b.is_zero()


@pytest.mark.parametrize("field", ALL_FIELDS)
@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_quad_coeffs_block_matches_fit(field, n):
    rng = rng_for(f"qc-{field.value}-{n}")
    for _ in range(20):
        z = UnitriangularMatrix.random(n, field, rng, scale=0.9)
        for p in range(1, n):
            blk = quad_coeffs(z, p)
            fit = fit_quad_coeffs(z, p)
            assert abs(blk.a - fit.a) <= 1e-10 * fit.a
            assert abs(blk.c - fit.c) <= 1e-10 * fit.c
            assert np.allclose(blk.b.components, fit.b.components,
                               atol=1e-10 * max(1.0, fit.b.norm()))


@pytest.mark.parametrize("field", ALL_FIELDS)
def test_quad_coeffs_lemma_identities(field):
    rng = rng_for(f"lemma-{field.value}")
    for n in (3, 4, 6):
        for _ in range(30):
            z = UnitriangularMatrix.random(n, field, rng, scale=0.8)
            for p in range(1, n):
                qc = quad_coeffs(z, p)
                a_expected = corner_gram_det(z, p - 1, n - 1)
                disc_expected = (corner_gram_det(z, p - 1, n)
                                 * corner_gram_det(z, p, n - 1))
                assert abs(qc.a - a_expected) <= 1e-9 * a_expected
                assert abs(qc.discriminant - disc_expected) \
                    <= 1e-9 * disc_expected


def test_quad_coeffs_evaluate_matches_statistic():
    rng = rng_for("qc-eval")
    for field in ALL_FIELDS:
        z = UnitriangularMatrix.random(4, field, rng)
        qc = quad_coeffs(z, 2)
        u = z.entry(2, 4)
        assert abs(qc.evaluate(u) - corner_gram_det(z, 2, 4)) \
            <= 1e-10 * corner_gram_det(z, 2, 4)


def test_quad_coeffs_validation():
    with pytest.raises(ValueError):
        QuadCoeffs(a=-1.0, b=Scalar.zero(Field.REAL), c=1.0)
    with pytest.raises(ValueError):
        QuadCoeffs(a=1.0, b=Scalar.of(Field.REAL, 3.0), c=1.0)


# -- Desnanot-Jacobi ----------------------------------------------------------

def test_dj_base_case_2x2():
    rng = rng_for("dj2")
    s = KMatrix.random(2, 2, Field.REAL, rng)
    # order-2 matrix: the interior is empty, det(U) = 1, the identity is the
    # cofactor expansion itself
    assert desnanot_jacobi_residual(s) < 1e-14


@pytest.mark.parametrize("field,size", [(Field.REAL, 5), (Field.COMPLEX, 4)])
def test_dj_random(field, size):
    rng = rng_for(f"dj-{field.value}{size}")
    for _ in range(50):
        s = KMatrix.random(size, size, field, rng)
        assert desnanot_jacobi_check(s, rel_tol=1e-9)


def test_dj_rejects_quaternions():
    rng = rng_for("dj-h")
    s = KMatrix.random(4, 4, Field.QUATERNION, rng)
    with pytest.raises(FieldMismatchError):
        desnanot_jacobi_check(s)


# -- structural validation ----------------------------------------------------

def test_unitriangular_structure_enforced():
    comps = np.zeros((2, 2, 4))
    comps[0, 0, 0] = 1.0
    comps[1, 1, 0] = 1.0
    comps[1, 0, 0] = 0.5
    with pytest.raises(ValueError):
        UnitriangularMatrix(comps, Field.REAL)
    z = UnitriangularMatrix.identity(3, Field.REAL)
    with pytest.raises(ValueError):
        z.set_entry(2, 1, Scalar.of(Field.REAL, 1.0))
    with pytest.raises(FieldMismatchError):
        z.set_entry(1, 2, Scalar.of(Field.COMPLEX, 1.0, 1.0))


def test_condition_warning_emitted():
    m = KMatrix.from_real([[1.0, 1.0], [1.0, 1.0 + 1e-15]])
    with pytest.warns(IllConditionedWarning):
        det_commutative(m)
