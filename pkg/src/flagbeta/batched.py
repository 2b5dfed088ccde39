"""Vectorized kernels on raw component arrays.

A batch of matrices over K is an array of shape (..., rows, cols, 4) holding
the four real components of every entry (trailing components zero for R, C).
The Monte-Carlo paths run on millions of matrices at once, so everything here
is plain numpy with no per-sample Python work.
"""

from __future__ import annotations

import numpy as np

from .fields import Field

__all__ = [
    "real_embedding",
    "logdet_psd",
    "log_corner_gram",
    "unit_batch",
    "random_unitriangular",
    "column_log_densities",
]


def real_embedding(comps: np.ndarray, field: Field) -> np.ndarray:
    """Embed (..., r, c, 4) matrices over K as (..., kappa*r, kappa*c) real ones.

    Entries are replaced by their left-multiplication blocks on the basis
    (1, i, j, k); the embedding is an algebra homomorphism and sends the
    conjugate transpose to the real transpose.
    """
    kappa = field.kappa
    a, b, c, d = comps[..., 0], comps[..., 1], comps[..., 2], comps[..., 3]
    *batch, rows, cols = a.shape
    if kappa == 1:
        return np.ascontiguousarray(a)
    out = np.zeros((*batch, rows, kappa, cols, kappa))
    if kappa == 2:
        out[..., :, 0, :, 0] = a
        out[..., :, 0, :, 1] = -b
        out[..., :, 1, :, 0] = b
        out[..., :, 1, :, 1] = a
    else:
        out[..., :, 0, :, 0] = a
        out[..., :, 0, :, 1] = -b
        out[..., :, 0, :, 2] = -c
        out[..., :, 0, :, 3] = -d
        out[..., :, 1, :, 0] = b
        out[..., :, 1, :, 1] = a
        out[..., :, 1, :, 2] = -d
        out[..., :, 1, :, 3] = c
        out[..., :, 2, :, 0] = c
        out[..., :, 2, :, 1] = d
        out[..., :, 2, :, 2] = a
        out[..., :, 2, :, 3] = -b
        out[..., :, 3, :, 0] = d
        out[..., :, 3, :, 1] = -c
        out[..., :, 3, :, 2] = b
        out[..., :, 3, :, 3] = a
    return out.reshape(*batch, rows * kappa, cols * kappa)


def _det_small(g: np.ndarray) -> np.ndarray:
    """Determinant of stacked matrices of order <= 4 by direct expansion."""
    m = g.shape[-1]
    if m == 0:
        return np.ones(g.shape[:-2])
    if m == 1:
        return g[..., 0, 0]
    if m == 2:
        return g[..., 0, 0] * g[..., 1, 1] - g[..., 0, 1] * g[..., 1, 0]
    if m == 3:
        return (g[..., 0, 0] * (g[..., 1, 1] * g[..., 2, 2] - g[..., 1, 2] * g[..., 2, 1])
                - g[..., 0, 1] * (g[..., 1, 0] * g[..., 2, 2] - g[..., 1, 2] * g[..., 2, 0])
                + g[..., 0, 2] * (g[..., 1, 0] * g[..., 2, 1] - g[..., 1, 1] * g[..., 2, 0]))
    if m == 4:
        acc = np.zeros(g.shape[:-2])
        cols = np.arange(4)
        for j in range(4):
            minor = g[..., 1:, :][..., :, cols != j]
            acc += (-1.0) ** j * g[..., 0, j] * _det_small(minor)
        return acc
    raise ValueError("direct expansion limited to order <= 4")


def logdet_psd(g: np.ndarray, fast: bool = False) -> np.ndarray:
    """log det of stacked positive-definite real matrices.

    ``fast`` uses direct expansion for orders <= 4 (the sampler hot path);
    otherwise LAPACK slogdet, which is what verification paths get.
    """
    m = g.shape[-1]
    if m == 0:
        return np.zeros(g.shape[:-2])
    if fast and m <= 4:
        return np.log(_det_small(g))
    sign, logabs = np.linalg.slogdet(g)
    return np.where(sign > 0, logabs, -np.inf)


def log_corner_gram(comps: np.ndarray, field: Field, p: int, q: int,
                    fast: bool = False) -> np.ndarray:
    """log of det([Z]_pq [Z]_pq*) for a batch (..., n, n, 4) of matrices.

    Boundary conventions: p == 0 or p == q returns zeros (statistic 1).
    The Dieudonne normalization divides the embedded log-determinant by kappa.
    """
    if p == 0 or p == q:
        return np.zeros(comps.shape[:-3])
    if not 0 < p < q <= comps.shape[-2]:
        raise ValueError(f"corner indices out of range: p={p}, q={q}")
    corner = comps[..., :p, :q, :]
    if p == 1:
        # Gram is the 1x1 real matrix |row|^2; skip the embedding entirely.
        return np.log(np.sum(corner[..., 0, :, :] ** 2, axis=(-1, -2)))
    emb = real_embedding(corner, field)
    g = emb @ np.swapaxes(emb, -1, -2)
    return logdet_psd(g, fast=fast) / field.kappa


def unit_batch(size: int, n: int) -> np.ndarray:
    """(size, n, n, 4) identity unitriangular batch."""
    comps = np.zeros((size, n, n, 4))
    idx = np.arange(n)
    comps[:, idx, idx, 0] = 1.0
    return comps


def random_unitriangular(size: int, n: int, field: Field,
                         rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Batch of unitriangular matrices with iid normal free entries."""
    comps = unit_batch(size, n)
    kappa = field.kappa
    for k in range(n):
        for m in range(k + 1, n):
            comps[:, k, m, :kappa] = scale * rng.standard_normal((size, kappa))
    return comps


def column_log_densities(comps: np.ndarray, field: Field,
                         lam: np.ndarray, fast: bool = False) -> np.ndarray:
    """Unnormalized log-density -sum_p lam_p * log s_pn for a batch."""
    n = comps.shape[-2]
    out = np.zeros(comps.shape[:-3])
    for p in range(1, n):
        out -= lam[p - 1] * log_corner_gram(comps, field, p, n, fast=fast)
    return out


def fit_coeffs_batch(comps: np.ndarray, field: Field, p: int, q: int):
    """Probe-based quadratic coefficients of s_pq in u = z_pq for a batch.

    Returns (a, b, c) with a, c of shape (N,) and b of shape (N, 4).  The
    entry under probe is saved and restored, so the batch is unchanged.
    """
    size = comps.shape[0]
    saved = comps[:, p - 1, q - 1, :].copy()

    def s_with(vec4: np.ndarray) -> np.ndarray:
        comps[:, p - 1, q - 1, :] = vec4
        return np.exp(log_corner_gram(comps, field, p, q))

    try:
        s0 = s_with(np.zeros(4))
        e0 = np.zeros(4)
        e0[0] = 1.0
        s1 = s_with(e0)
        s2 = s_with(2.0 * e0)
        c = s0
        a = (s2 - 2.0 * s1 + s0) / 2.0
        b = np.zeros((size, 4))
        b[:, 0] = (s1 - s0 - a) / 2.0
        for m in range(1, field.kappa):
            em = np.zeros(4)
            em[m] = 1.0
            b[:, m] = (s_with(em) - a - c) / 2.0
    finally:
        comps[:, p - 1, q - 1, :] = saved
    return a, b, c
