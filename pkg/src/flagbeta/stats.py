"""Statistical acceptance tests used by the verification harness.

Two tools: a permutation energy test for multivariate two-sample equality
(used for the projection-consistency checks) and a Kolmogorov-Smirnov test of
the exact radial law of the spherical power-law scalars.
"""

from __future__ import annotations

import numpy as np
from scipy.special import betainc
from scipy.stats import kstest

__all__ = ["energy_two_sample", "radial_ks_pvalue", "radial_cdf"]


def energy_two_sample(x: np.ndarray, y: np.ndarray, rng: np.random.Generator,
                      n_perm: int = 199) -> tuple[float, float]:
    """Energy-distance two-sample test with a permutation p-value.

    x: (n, d), y: (m, d).  Returns (statistic, p).  The statistic is
    2 E|X-Y| - E|X-X'| - E|Y-Y'| under the empirical laws; labels are permuted
    with the supplied generator, so results are deterministic per seed.
    """
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    y = np.atleast_2d(np.asarray(y, dtype=np.float64))
    if x.shape[1] != y.shape[1]:
        raise ValueError("feature dimensions differ")
    n, m = x.shape[0], y.shape[0]
    pooled = np.concatenate([x, y], axis=0)
    diff = pooled[:, None, :] - pooled[None, :, :]
    dist = np.sqrt(np.sum(diff * diff, axis=-1))

    labels = np.zeros((n + m, n_perm + 1))
    labels[:n, 0] = 1.0
    for b in range(1, n_perm + 1):
        perm = rng.permutation(n + m)
        labels[perm[:n], b] = 1.0

    row_tot = dist.sum(axis=1)
    grand = row_tot.sum()
    dl = dist @ labels                                   # (n+m, B+1)
    s_xx = np.einsum("ib,ib->b", labels, dl)
    s_xt = labels.T @ row_tot
    s_xy = s_xt - s_xx
    s_yy = grand - 2.0 * s_xt + s_xx
    stats = 2.0 * s_xy / (n * m) - s_xx / n ** 2 - s_yy / m ** 2

    observed = stats[0]
    p = float((1 + np.sum(stats[1:] >= observed)) / (n_perm + 1))
    return float(observed), p


def radial_cdf(r: np.ndarray, kappa: int, nu: float) -> np.ndarray:
    """CDF of |W| for density on R^kappa proportional to (1+|w|^2)^(-nu).

    |W|^2 / (1 + |W|^2) is Beta(kappa/2, nu - kappa/2) distributed, so the
    CDF is the regularized incomplete beta at r^2/(1+r^2).
    """
    r = np.asarray(r, dtype=np.float64)
    s = r * r / (1.0 + r * r)
    return betainc(kappa / 2.0, nu - kappa / 2.0, s)


def radial_ks_pvalue(w_components: np.ndarray, kappa: int, nu: float) -> float:
    """KS p-value of draws against the exact radial law.

    ``w_components`` is (N, >=kappa); only the first kappa components enter.
    """
    r = np.sqrt(np.sum(w_components[:, :kappa] ** 2, axis=1))
    u = radial_cdf(r, kappa, nu)
    return float(kstest(u, "uniform").pvalue)
