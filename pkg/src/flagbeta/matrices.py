"""Matrices over R/C/H: corners, Gram statistics, determinants, Schur complements.

The central objects are unitriangular matrices Z (unit diagonal, zeros below)
and the corner-Gram statistics

    s_pq(Z) = det([Z]_pq [Z]_pq*),       1 <= p < q <= n,

where [Z]_pq is the upper-left p x q corner and det is the Dieudonne
determinant (ordinary |det| over R/C).  The statistic is a quadratic
polynomial in each single entry; ``quad_coeffs`` extracts those coefficients
by block formulas and ``fit_quad_coeffs`` re-derives them by probing, which
the test suite uses as an independent cross-check.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .batched import log_corner_gram, real_embedding
from .fields import Field, FieldMismatchError, Scalar, conj4, mul4

__all__ = [
    "KMatrix",
    "UnitriangularMatrix",
    "QuadCoeffs",
    "SingularBlockError",
    "IllConditionedWarning",
    "corner",
    "gram",
    "det_commutative",
    "dieudonne_det",
    "log_dieudonne_det",
    "corner_gram_det",
    "log_corner_gram_det",
    "schur_complement",
    "quad_coeffs",
    "fit_quad_coeffs",
    "desnanot_jacobi_check",
    "desnanot_jacobi_residual",
]

COND_WARN_THRESHOLD = 1e12


class SingularBlockError(ValueError):
    """A block that must be inverted is numerically singular."""


class IllConditionedWarning(RuntimeWarning):
    """Condition number beyond the desk-scale trust threshold."""


def _warn_if_ill_conditioned(real_matrix: np.ndarray, where: str):
    if real_matrix.size == 0 or min(real_matrix.shape) == 0:
        return
    cond = np.linalg.cond(real_matrix)
    if not np.isfinite(cond) or cond > COND_WARN_THRESHOLD:
        warnings.warn(f"{where}: condition number {cond:.3g} above "
                      f"{COND_WARN_THRESHOLD:.0e}", IllConditionedWarning,
                      stacklevel=3)


class KMatrix:
    """Dense matrix over R, C or H; entries stored as (rows, cols, 4) components."""

    __slots__ = ("components", "field")

    def __init__(self, components, field: Field):
        comps = np.asarray(components, dtype=np.float64)
        if comps.ndim != 3 or comps.shape[-1] != 4:
            raise ValueError(f"expected (rows, cols, 4) components, got {comps.shape}")
        if np.any(comps[..., field.kappa:] != 0.0):
            raise ValueError(f"components beyond kappa={field.kappa} must be zero")
        self.components = comps
        self.field = field

    # constructors ----------------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int, field: Field) -> "KMatrix":
        return cls(np.zeros((rows, cols, 4)), field)

    @classmethod
    def identity(cls, m: int, field: Field) -> "KMatrix":
        comps = np.zeros((m, m, 4))
        comps[np.arange(m), np.arange(m), 0] = 1.0
        return cls(comps, field)

    @classmethod
    def from_real(cls, arr) -> "KMatrix":
        arr = np.asarray(arr, dtype=np.float64)
        comps = np.zeros((*arr.shape, 4))
        comps[..., 0] = arr
        return cls(comps, Field.REAL)

    @classmethod
    def from_complex(cls, arr) -> "KMatrix":
        arr = np.asarray(arr, dtype=np.complex128)
        comps = np.zeros((*arr.shape, 4))
        comps[..., 0] = arr.real
        comps[..., 1] = arr.imag
        return cls(comps, Field.COMPLEX)

    @classmethod
    def random(cls, rows: int, cols: int, field: Field,
               rng: np.random.Generator, scale: float = 1.0) -> "KMatrix":
        comps = np.zeros((rows, cols, 4))
        comps[..., : field.kappa] = scale * rng.standard_normal(
            (rows, cols, field.kappa))
        return cls(comps, field)

    # views -----------------------------------------------------------------
    @property
    def rows(self) -> int:
        return self.components.shape[0]

    @property
    def cols(self) -> int:
        return self.components.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def entry(self, i: int, j: int) -> Scalar:
        """Entry at 0-based (i, j)."""
        return Scalar(self.components[i, j].copy(), self.field)

    def to_complex_array(self) -> np.ndarray:
        if self.field is Field.QUATERNION:
            raise FieldMismatchError("no complex array form for quaternions")
        return self.components[..., 0] + 1j * self.components[..., 1]

    def real_embedding(self) -> np.ndarray:
        return real_embedding(self.components, self.field)

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "KMatrix":
        return KMatrix(self.components[r0:r1, c0:c1].copy(), self.field)

    # algebra ----------------------------------------------------------------
    def _check(self, other: "KMatrix"):
        if self.field is not other.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")

    def conj_transpose(self) -> "KMatrix":
        return KMatrix(conj4(np.swapaxes(self.components, 0, 1)), self.field)

    def __matmul__(self, other: "KMatrix") -> "KMatrix":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        prod = mul4(self.components[:, :, None, :], other.components[None, :, :, :])
        return KMatrix(prod.sum(axis=1), self.field)

    def __add__(self, other: "KMatrix") -> "KMatrix":
        self._check(other)
        return KMatrix(self.components + other.components, self.field)

    def __sub__(self, other: "KMatrix") -> "KMatrix":
        self._check(other)
        return KMatrix(self.components - other.components, self.field)

    def __repr__(self):
        return f"KMatrix[{self.field.value}]({self.rows}x{self.cols})"


class UnitriangularMatrix:
    """Upper triangular matrix with unit diagonal; free entries above it.

    Entry indices are 1-based as in the math: z_pq with 1 <= p < q <= n.
    The structural part (diagonal ones, zeros below) is enforced on
    construction and cannot be modified.
    """

    __slots__ = ("components", "field")

    def __init__(self, components, field: Field):
        comps = np.asarray(components, dtype=np.float64)
        n = comps.shape[0]
        if comps.shape != (n, n, 4):
            raise ValueError(f"expected (n, n, 4), got {comps.shape}")
        if np.any(comps[..., field.kappa:] != 0.0):
            raise ValueError("components beyond kappa must be zero")
        idx = np.arange(n)
        diag_ok = (np.all(comps[idx, idx, 0] == 1.0)
                   and np.all(comps[idx, idx, 1:] == 0.0))
        below = np.tril(np.ones((n, n)), -1).astype(bool)
        if not diag_ok or np.any(comps[below] != 0.0):
            raise ValueError("matrix is not unitriangular")
        self.components = comps
        self.field = field

    @classmethod
    def identity(cls, n: int, field: Field) -> "UnitriangularMatrix":
        comps = np.zeros((n, n, 4))
        comps[np.arange(n), np.arange(n), 0] = 1.0
        return cls(comps, field)

    @classmethod
    def random(cls, n: int, field: Field, rng: np.random.Generator,
               scale: float = 1.0) -> "UnitriangularMatrix":
        z = cls.identity(n, field)
        for k in range(1, n):
            for m in range(k + 1, n + 1):
                z.set_entry(k, m, Scalar(
                    np.concatenate([scale * rng.standard_normal(field.kappa),
                                    np.zeros(4 - field.kappa)]), field))
        return z

    @property
    def order(self) -> int:
        return self.components.shape[0]

    def entry(self, p: int, q: int) -> Scalar:
        self._check_free(p, q)
        return Scalar(self.components[p - 1, q - 1].copy(), self.field)

    def set_entry(self, p: int, q: int, value: Scalar):
        self._check_free(p, q)
        if value.field is not self.field:
            raise FieldMismatchError(f"{value.field} vs {self.field}")
        self.components[p - 1, q - 1] = value.components

    def _check_free(self, p: int, q: int):
        if not 1 <= p < q <= self.order:
            raise ValueError(f"free entries have 1 <= p < q <= {self.order}; "
                             f"got ({p}, {q})")

    def free_indices(self):
        n = self.order
        return [(p, q) for p in range(1, n) for q in range(p + 1, n + 1)]

    def as_kmatrix(self) -> KMatrix:
        return KMatrix(self.components.copy(), self.field)

    def copy(self) -> "UnitriangularMatrix":
        return UnitriangularMatrix(self.components.copy(), self.field)

    def __repr__(self):
        return f"UnitriangularMatrix[{self.field.value}](n={self.order})"


# ---------------------------------------------------------------------------
# corners, Gram matrices and determinants
# ---------------------------------------------------------------------------

def corner(z: UnitriangularMatrix, p: int, q: int) -> KMatrix:
    """Upper-left p x q corner [Z]_pq, 1 <= p < q <= n."""
    if not 1 <= p < q <= z.order:
        raise ValueError(f"require 1 <= p < q <= {z.order}; got ({p}, {q})")
    return KMatrix(z.components[:p, :q].copy(), z.field)


def gram(m: KMatrix) -> KMatrix:
    """M M*, Hermitian positive semidefinite."""
    return m @ m.conj_transpose()


def det_commutative(m: KMatrix) -> Scalar:
    """Signed determinant over R or C (LU with partial pivoting)."""
    if m.field is Field.QUATERNION:
        raise FieldMismatchError("signed determinant undefined over H; "
                                 "use dieudonne_det")
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    if m.rows == 0:
        return Scalar.one(m.field)
    if m.field is Field.REAL:
        arr = m.components[..., 0]
        _warn_if_ill_conditioned(arr, "det_commutative")
        return Scalar.of(Field.REAL, float(np.linalg.det(arr)))
    arr = m.to_complex_array()
    _warn_if_ill_conditioned(arr, "det_commutative")
    d = complex(np.linalg.det(arr))
    return Scalar.of(Field.COMPLEX, d.real, d.imag)


def log_dieudonne_det(m: KMatrix) -> float:
    """log of the Dieudonne determinant: log|det(real embedding)| / kappa."""
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    if m.rows == 0:
        return 0.0
    emb = m.real_embedding()
    _warn_if_ill_conditioned(emb, "dieudonne_det")
    sign, logabs = np.linalg.slogdet(emb)
    if sign == 0:
        return -np.inf
    return float(logabs) / m.field.kappa


def dieudonne_det(m: KMatrix) -> float:
    """Nonnegative multiplicative determinant for all three fields.

    Equals |det| over R and C, and the fourth root of the real-embedding
    determinant over H.
    """
    v = log_dieudonne_det(m)
    return 0.0 if v == -np.inf else float(np.exp(v))


def log_corner_gram_det(z: UnitriangularMatrix, p: int, q: int) -> float:
    """log s_pq(Z); boundary conventions s_0q = s_pp = 1."""
    if not (0 <= p <= q <= z.order):
        raise ValueError(f"require 0 <= p <= q <= {z.order}; got ({p}, {q})")
    return float(log_corner_gram(z.components[None], z.field, p, q)[0])


def corner_gram_det(z: UnitriangularMatrix, p: int, q: int) -> float:
    """s_pq(Z) = Dieudonne det of [Z]_pq [Z]_pq*; always positive."""
    return float(np.exp(log_corner_gram_det(z, p, q)))


# ---------------------------------------------------------------------------
# Schur complements and the block solve behind them
# ---------------------------------------------------------------------------

def _solve(a: KMatrix, b: KMatrix) -> KMatrix:
    """Solve A X = B over K via the real embedding."""
    emb_a = a.real_embedding()
    emb_b = b.real_embedding()
    if a.rows == 0:
        return KMatrix.zeros(a.cols, b.cols, a.field)
    _warn_if_ill_conditioned(emb_a, "block solve")
    try:
        emb_x = np.linalg.solve(emb_a, emb_b)
    except np.linalg.LinAlgError as exc:
        raise SingularBlockError(str(exc)) from exc
    return _unembed(emb_x, a.field, a.cols, b.cols)


def _unembed(emb: np.ndarray, field: Field, rows: int, cols: int) -> KMatrix:
    """Read components back from a real embedding (first column of each block)."""
    kappa = field.kappa
    comps = np.zeros((rows, cols, 4))
    blocks = emb.reshape(rows, kappa, cols, kappa)
    comps[..., :kappa] = np.moveaxis(blocks[..., 0], 1, -1)
    return KMatrix(comps, field)


def schur_complement(m: KMatrix, split: int) -> KMatrix:
    """x - w u^{-1} v for the block splitting at ``split``.

    u is the top-left split x split block.  For Hermitian positive-definite
    input the result is again positive definite.
    """
    if m.rows != m.cols:
        raise ValueError("Schur complement of a non-square matrix")
    if not 0 < split < m.rows:
        raise ValueError(f"split must lie in (0, {m.rows})")
    u = m.block(0, split, 0, split)
    v = m.block(0, split, split, m.rows)
    w = m.block(split, m.rows, 0, split)
    x = m.block(split, m.rows, split, m.rows)
    return x - (w @ _solve(u, v))


# ---------------------------------------------------------------------------
# quadratic coefficients of s_pn in the entry u = z_pn
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadCoeffs:
    """Coefficients of s_pn(Z) = a|u|^2 + u*conj(b) + b*conj(u) + c in u = z_pn.

    a and c are real positive and a*c - |b|^2 > 0 (positive definiteness).
    """

    a: float
    b: Scalar
    c: float

    def __post_init__(self):
        if not (self.a > 0 and self.c > 0):
            raise ValueError(f"need a, c > 0; got a={self.a}, c={self.c}")
        if self.discriminant <= 0:
            raise ValueError("positive definiteness requires a*c - |b|^2 > 0")

    @property
    def discriminant(self) -> float:
        return self.a * self.c - self.b.abs2()

    def evaluate(self, u: Scalar) -> float:
        term = u * self.b.conj()
        return self.a * u.abs2() + 2.0 * term.real + self.c


def quad_coeffs(z: UnitriangularMatrix, p: int) -> QuadCoeffs:
    """Quadratic coefficients of s_pn in u = z_pn via the block splitting.

    [Z]_pn is split as [[Q, R, t], [0, rho, u]] with Q of order p-1; with
    G = QQ* + RR* + tt* the coefficients are

        a = det(G) (1 - t* G^{-1} t)
        b = -det(G) (rho R* G^{-1} t)
        c = det(G) (rho rho* - rho R* G^{-1} R rho*)

    where det is the Dieudonne determinant (real, positive here).
    ``fit_quad_coeffs`` recovers the same triple by probing and is kept as an
    independent cross-check of this transcription.
    """
    n = z.order
    if not 1 <= p <= n - 1:
        raise ValueError(f"require 1 <= p <= {n - 1}; got p={p}")
    field = z.field
    qm = KMatrix(z.components[: p - 1, : p - 1].copy(), field)
    rm = KMatrix(z.components[: p - 1, p - 1: n - 1].copy(), field)
    tm = KMatrix(z.components[: p - 1, n - 1: n].copy(), field)
    rho = KMatrix(z.components[p - 1: p, p - 1: n - 1].copy(), field)

    g = gram(qm) + gram(rm) + gram(tm)
    det_g = dieudonne_det(g)

    g_inv_t = _solve(g, tm)                       # (p-1) x 1
    rho_r = rho @ rm.conj_transpose()             # 1 x (p-1)
    r_rho = rm @ rho.conj_transpose()             # (p-1) x 1
    g_inv_r_rho = _solve(g, r_rho)

    t_g_t = (tm.conj_transpose() @ g_inv_t)       # 1x1, real
    rho_g_rho = (rho_r @ g_inv_r_rho)             # 1x1, real
    rho_rho = (rho @ rho.conj_transpose())        # 1x1, real
    b_mat = rho_r @ g_inv_t                       # 1x1 over K

    a = det_g * (1.0 - (t_g_t.entry(0, 0).real if p > 1 else 0.0))
    b = Scalar((-det_g) * b_mat.entry(0, 0).components if p > 1 else np.zeros(4),
               field)
    c = det_g * (rho_rho.entry(0, 0).real
                 - (rho_g_rho.entry(0, 0).real if p > 1 else 0.0))
    return QuadCoeffs(a=float(a), b=b, c=float(c))


def fit_quad_coeffs(z: UnitriangularMatrix, p: int) -> QuadCoeffs:
    """Recover (a, b, c) by evaluating s_pn at probe values of u = z_pn.

    Uses s(0) = c, s(2) = 4a + 4 b_0 + c, s(e_m) = a + 2 b_m + c for each
    basis unit e_m.  Field-agnostic; independent of the block formulas.
    """
    n = z.order
    if not 1 <= p <= n - 1:
        raise ValueError(f"require 1 <= p <= {n - 1}; got p={p}")
    field = z.field
    work = z.copy()

    def s_at(value: Scalar) -> float:
        work.set_entry(p, n, value)
        return corner_gram_det(work, p, n)

    s0 = s_at(Scalar.zero(field))
    s1 = s_at(Scalar.one(field))
    s2 = s_at(Scalar.of(field, 2.0))
    c = s0
    a = (s2 - 2.0 * s1 + s0) / 2.0
    b_comps = np.zeros(4)
    b_comps[0] = (s1 - s0 - a) / 2.0
    for m in range(1, field.kappa):
        b_comps[m] = (s_at(Scalar.unit(field, m)) - a - c) / 2.0
    return QuadCoeffs(a=a, b=Scalar(b_comps, field), c=c)


# ---------------------------------------------------------------------------
# Desnanot-Jacobi identity (commutative fields only)
# ---------------------------------------------------------------------------

def desnanot_jacobi_residual(s: KMatrix) -> float:
    """Relative residual of det(U)det(S) = det_11 det_22 - det_12 det_21.

    U is S with its last two rows and columns removed; the four minors delete
    one of those rows and one of those columns each.
    """
    if s.field is Field.QUATERNION:
        raise FieldMismatchError("identity does not hold over H")
    if s.rows != s.cols or s.rows < 2:
        raise ValueError("need a square matrix of order >= 2")
    arr = s.to_complex_array() if s.field is Field.COMPLEX else \
        s.components[..., 0].astype(np.complex128)
    m = s.rows - 2

    def minor(drop_row: int, drop_col: int) -> complex:
        keep_r = [i for i in range(s.rows) if i != drop_row]
        keep_c = [j for j in range(s.cols) if j != drop_col]
        return complex(np.linalg.det(arr[np.ix_(keep_r, keep_c)]))

    det_s = complex(np.linalg.det(arr))
    det_u = complex(np.linalg.det(arr[:m, :m])) if m > 0 else 1.0 + 0j
    lhs = det_u * det_s
    rhs = (minor(m + 1, m + 1) * minor(m, m)
           - minor(m, m + 1) * minor(m + 1, m))
    scale = max(abs(lhs), abs(rhs), 1.0)
    return abs(lhs - rhs) / scale


def desnanot_jacobi_check(s: KMatrix, rel_tol: float = 1e-9) -> bool:
    """True when the identity holds to ``rel_tol`` on this matrix."""
    return desnanot_jacobi_residual(s) < rel_tol
