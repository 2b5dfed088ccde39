"""Exact samplers for the column-exponent flag measures and Monte-Carlo estimation.

The probability measure of order n with column exponents (lam_1 .. lam_{n-1})
has unnormalized density  prod_p s_pn(Z)^(-lam_p)  on unitriangular matrices.
Because its marginal under forgetting the last column is the same family one
order down, a sample is built column by column; within column q the entries
are drawn top-down, each from a quadratic-form power law

    density(u)  proportional to  (a|u|^2 + u conj(b) + b conj(u) + c)^(-nu),
    nu = lam_p + ... + lam_{q-1} - (q-1-p) kappa/2,

which an affine change of variable turns into a spherical Student-t.  The
resulting chain is exact, not approximate.

Monte-Carlo integration of general corner-exponent products uses these
measures as importance proposals: their normalization constants are available
in closed form by stacking projection constants.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .batched import column_log_densities, log_corner_gram, unit_batch
from .closedform import (CornerExponents, DivergenceError,
                         effective_exponents, in_convergence_domain,
                         telescoped_log_constant)
from .fields import Field, Scalar
from .matrices import UnitriangularMatrix, quad_coeffs

__all__ = [
    "DegenerateProposalError",
    "FlagMeasure",
    "FlagSample",
    "FlagBatch",
    "MCEstimate",
    "student_t_sample",
    "conditional_entry_sample",
    "sample_flag",
    "sample_flags",
    "project",
    "default_proposal",
    "importance_estimate",
    "worker_rng",
]


class DegenerateProposalError(RuntimeError):
    """Importance weights vanished everywhere; the proposal misses the target."""


def worker_rng(seed: int, worker: int) -> np.random.Generator:
    """Counter-based generator for one worker stream (Philox)."""
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(entropy=seed,
                                                spawn_key=(worker,))))


def split_counts(total: int, workers: int) -> list[int]:
    base, extra = divmod(total, workers)
    return [base + (1 if w < extra else 0) for w in range(workers)]


@dataclass(frozen=True)
class FlagMeasure:
    """Order, field and positive column exponents of one flag measure."""

    n: int
    field: Field
    lam: tuple

    def __post_init__(self):
        object.__setattr__(self, "lam", tuple(float(v) for v in self.lam))
        if self.n < 1:
            raise ValueError("order must be >= 1")
        if len(self.lam) != self.n - 1:
            raise ValueError(f"need {self.n - 1} exponents for order {self.n}")
        bad = [(p, q) for (p, q), nu in self._entry_exponents().items()
               if nu <= self.field.kappa / 2.0]
        if bad:
            raise DivergenceError(
                "column exponents do not define a finite measure; the "
                f"effective exponent is <= kappa/2 at entries {bad}")

    def _entry_exponents(self) -> dict:
        kappa = self.field.kappa
        return {(p, q): sum(self.lam[p - 1: q - 1]) - (q - 1 - p) * kappa / 2.0
                for q in range(2, self.n + 1) for p in range(1, q)}

    def entry_exponent(self, p: int, q: int) -> float:
        """Effective Student-t exponent for entry (p, q) in the sampling chain."""
        return self._entry_exponents()[(p, q)]

    def corner_exponents(self) -> CornerExponents:
        return CornerExponents.column(self.n, self.lam)

    def log_normalization(self) -> float:
        """log of the total mass (the measure is then normalized by it)."""
        if self.n == 1:
            return 0.0
        return float(telescoped_log_constant(self.lam, self.field).real)


@dataclass(frozen=True)
class FlagSample:
    """One draw: the matrix, its unnormalized log-density and provenance."""

    matrix: UnitriangularMatrix
    log_density: float
    seed_info: dict


class FlagBatch:
    """A batch of draws stored as raw components plus per-sample log-density."""

    def __init__(self, components: np.ndarray, log_density: np.ndarray,
                 measure: FlagMeasure, seed: int, workers: int):
        self.components = components
        self.log_density = log_density
        self.measure = measure
        self.seed = seed
        self.workers = workers

    def __len__(self) -> int:
        return self.components.shape[0]

    def matrix(self, i: int) -> UnitriangularMatrix:
        return UnitriangularMatrix(self.components[i].copy(), self.measure.field)

    def sample(self, i: int) -> FlagSample:
        return FlagSample(self.matrix(i), float(self.log_density[i]),
                          {"seed": self.seed, "workers": self.workers,
                           "index": i})

    def recomputed_log_density(self) -> np.ndarray:
        return column_log_densities(self.components, self.measure.field,
                                    np.asarray(self.measure.lam))


# ---------------------------------------------------------------------------
# Student-t draws
# ---------------------------------------------------------------------------

def _student_t_batch(nu: float, kappa: int, rng: np.random.Generator,
                     size: int) -> np.ndarray:
    """(size, 4) draws with density proportional to (1 + |w|^2)^(-nu) on R^kappa.

    Realized as g / sqrt(X) with g standard normal in R^kappa and X an
    independent chi-square with 2 nu - kappa degrees of freedom; substituting
    into the normal-times-chi-square joint density gives exactly the target
    radial power law.
    """
    dof = 2.0 * nu - kappa
    if dof <= 0:
        raise DivergenceError(f"need nu > kappa/2; got nu={nu}, kappa={kappa}")
    g = rng.standard_normal((size, kappa))
    x = rng.chisquare(dof, size)
    out = np.zeros((size, 4))
    out[:, :kappa] = g / np.sqrt(x)[:, None]
    return out


def student_t_sample(nu: float, field: Field, rng: np.random.Generator) -> Scalar:
    """One scalar with density proportional to (1 + |w|^2)^(-nu)."""
    return Scalar(_student_t_batch(nu, field.kappa, rng, 1)[0], field)


def conditional_entry_sample(z: UnitriangularMatrix, p: int, nu_eff: float,
                             rng: np.random.Generator) -> Scalar:
    """Draw u = z_pn from density proportional to s_pn(Z)^(-nu_eff).

    Entries z_kn with k < p must already be set.  Completing the square of
    the quadratic coefficients moves the law to a centered Student-t:
    u = -b/a + sqrt(ac - |b|^2)/a * w.
    """
    coeffs = quad_coeffs(z, p)
    w = student_t_sample(nu_eff, z.field, rng)
    shift = Scalar(-coeffs.b.components / coeffs.a, z.field)
    scale = math.sqrt(coeffs.discriminant) / coeffs.a
    return shift + scale * w


# ---------------------------------------------------------------------------
# exact sampling of whole matrices
# ---------------------------------------------------------------------------

def sample_flag(measure: FlagMeasure, rng: np.random.Generator) -> FlagSample:
    """One exact draw, built column by column through the entry conditionals."""
    n, field = measure.n, measure.field
    z = UnitriangularMatrix.identity(n, field)
    for q in range(2, n + 1):
        sub = UnitriangularMatrix(z.components[:q, :q].copy(), field)
        for p in range(1, q):
            u = conditional_entry_sample(sub, p, measure.entry_exponent(p, q),
                                         rng)
            sub.set_entry(p, q, u)
        z.components[:q, :q] = sub.components
    logd = float(column_log_densities(z.components[None], field,
                                      np.asarray(measure.lam))[0])
    return FlagSample(z, logd, {"seed": None, "workers": None, "index": None})


def _sample_batch_components(measure: FlagMeasure, count: int,
                             rng: np.random.Generator) -> np.ndarray:
    n, field = measure.n, measure.field
    kappa = field.kappa
    comps = unit_batch(count, n)
    for q in range(2, n + 1):
        for p in range(1, q):
            nu = measure.entry_exponent(p, q)
            a = np.exp(log_corner_gram(comps, field, p - 1, q - 1, fast=True))
            c = np.exp(log_corner_gram(comps, field, p, q, fast=True))
            b = np.zeros((count, 4))
            for m in range(kappa):
                comps[:, p - 1, q - 1, :] = 0.0
                comps[:, p - 1, q - 1, m] = 1.0
                s_m = np.exp(log_corner_gram(comps, field, p, q, fast=True))
                b[:, m] = (s_m - a - c) / 2.0
            comps[:, p - 1, q - 1, :] = 0.0
            disc = np.exp(log_corner_gram(comps, field, p - 1, q, fast=True)
                          + log_corner_gram(comps, field, p, q - 1, fast=True))
            w = _student_t_batch(nu, kappa, rng, count)
            comps[:, p - 1, q - 1, :] = (-b / a[:, None]
                                         + (np.sqrt(disc) / a)[:, None] * w)
    return comps


def sample_flags(measure: FlagMeasure, count: int, seed: int,
                 workers: int = 1) -> FlagBatch:
    """Batch of exact draws; deterministic for fixed (measure, seed, workers).

    Worker streams are independent counter-based generators merged in worker
    order, so any execution schedule produces the same batch.
    """
    if count < 0:
        raise ValueError("count must be nonnegative")
    workers = max(1, int(workers))
    counts = split_counts(count, workers)

    def run(w: int) -> np.ndarray:
        return _sample_batch_components(measure, counts[w], worker_rng(seed, w))

    if workers == 1:
        parts = [run(0)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, range(workers)))
    comps = np.concatenate(parts, axis=0) if parts else unit_batch(0, measure.n)
    logd = column_log_densities(comps, measure.field,
                                np.asarray(measure.lam))
    return FlagBatch(comps, logd, measure, seed, workers)


def project(z: UnitriangularMatrix) -> UnitriangularMatrix:
    """Forget the last column/row: the leading block of order n-1."""
    if z.order < 2:
        raise ValueError("cannot project an order-1 matrix")
    return UnitriangularMatrix(z.components[:-1, :-1].copy(), z.field)


def project_components(comps: np.ndarray) -> np.ndarray:
    return comps[..., :-1, :-1, :].copy()


# ---------------------------------------------------------------------------
# importance-sampling estimation of the general corner integrals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MCEstimate:
    """Monte-Carlo estimate with its standard error and provenance."""

    mean: complex
    stderr: float
    n_samples: int
    seed: int
    meta: dict = dataclass_field(default_factory=dict)

    def z_score(self, expected) -> float:
        """|mean - expected| / stderr with a tiny relative floor on stderr."""
        floor = 1e-12 * max(abs(complex(expected)), abs(complex(self.mean)))
        return abs(complex(self.mean) - complex(expected)) / max(self.stderr,
                                                                 floor, 1e-300)


def default_proposal(lam: CornerExponents, field: Field) -> FlagMeasure:
    """Column measure matched to the target's row sums.

    The proposal exponent for row p is sum_q Re(lambda_pq); if that vector
    fails the finiteness hypothesis it is raised elementwise to
    3 kappa / 4, which restores every partial-sum condition with margin
    kappa/4.  Values already valid are left untouched so that column-only
    targets are reproduced exactly.
    """
    rows = [v.real for v in lam.row_sums()]
    try:
        return FlagMeasure(lam.n, field, tuple(rows))
    except DivergenceError:
        floor = 0.75 * field.kappa
        return FlagMeasure(lam.n, field,
                           tuple(max(v, floor) for v in rows))


def importance_estimate(lam: CornerExponents, proposal: FlagMeasure | None,
                        count: int, seed: int, workers: int = 1) -> MCEstimate:
    """Estimate the integral of prod s_pq^(-lambda_pq) by importance sampling.

    Draws come from a column flag measure whose normalization is known in
    closed form; the weight of a draw is the target integrand divided by the
    normalized proposal density.  Exponents shared between target and
    proposal cancel exactly before any arithmetic, so a column-only target
    equal to its proposal yields constant unit weights.
    """
    field = proposal.field if proposal is not None else None
    if proposal is None:
        raise ValueError("a proposal measure is required; see default_proposal")
    if lam.n != proposal.n:
        raise ValueError("target and proposal orders differ")
    if not in_convergence_domain(lam, field):
        nu = effective_exponents(lam, field)
        raise DivergenceError(
            f"target outside the convergence domain (min Re nu = "
            f"{nu.min_real():.6g} <= {field.kappa / 2})")
    if count < 1:
        raise ValueError("need at least one sample")

    n = lam.n
    effective = {}
    for p in range(1, n):
        for q in range(p + 1, n + 1):
            e = lam[(p, q)]
            if q == n:
                e = e - proposal.lam[p - 1]
            if e != 0:
                effective[(p, q)] = e

    workers = max(1, int(workers))
    counts = split_counts(count, workers)

    def run(w: int) -> np.ndarray:
        comps = _sample_batch_components(proposal, counts[w],
                                         worker_rng(seed, w))
        log_w = np.zeros(counts[w], dtype=np.complex128)
        for (p, q), e in effective.items():
            log_w -= e * log_corner_gram(comps, field, p, q, fast=True)
        return np.exp(log_w)

    if workers == 1:
        parts = [run(0)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, range(workers)))
    weights = np.concatenate(parts)
    if not np.all(np.isfinite(weights)):
        raise DegenerateProposalError("non-finite importance weights")
    if np.all(weights == 0):
        raise DegenerateProposalError("all importance weights are zero")

    norm = np.exp(proposal.log_normalization())
    mean_w = weights.mean()
    var_w = np.mean(np.abs(weights - mean_w) ** 2)
    stderr = norm * math.sqrt(var_w / count)
    mean = norm * mean_w
    if lam.is_real():
        mean = mean.real
    return MCEstimate(mean=mean, stderr=float(stderr), n_samples=count,
                      seed=seed, meta={"workers": workers,
                                       "proposal": proposal.lam})
