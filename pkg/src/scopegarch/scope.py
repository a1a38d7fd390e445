"""Score-permutation confidence regions.

The construction: reconstruct residuals at a candidate theta, rebuild m-1
alternative trajectories with the residual indices permuted, and rank the
squared norm of the observed score among the perturbed ones under the
tie-broken total order.  Candidates whose rank is at most m-r form the
region; at the data-generating parameter the rank is uniform, which is what
makes the coverage exact at level 1 - r/m for any i.i.d. noise.

All randomness is frozen in a PermutationSet drawn once per region, so
membership is a deterministic function of (sample, theta, PermutationSet).
"""

from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .garch import residuals, standardize

__all__ = [
    "PermutationSet",
    "ScopeConfig",
    "RankField",
    "RegionEvaluator",
    "perturbed_score",
    "rank",
    "in_region",
    "rank_field",
]


def _check_permutation(arr, size, name):
    if arr.ndim == 1:
        arr = arr[None, :]
    ref = np.arange(size, dtype=np.intp)
    for row in arr:
        if row.shape[0] != size or not np.array_equal(np.sort(row), ref):
            raise ValueError(f"{name} must contain permutations of 0..{size - 1}")


@dataclass(frozen=True)
class PermutationSet:
    """Frozen randomness of one region: m-1 index permutations plus nu.

    ``perms`` has shape (m-1, n), each row a permutation of 0..n-1 (the
    identity permutation is implicit as row "0" of the construction).
    ``nu`` is a permutation of 0..m-1 used to break ties among the m squared
    norms.  Regeneration from the same seed is bit-identical.
    """

    perms: np.ndarray
    nu: np.ndarray
    seed: object

    def __post_init__(self):
        perms = np.ascontiguousarray(self.perms, dtype=np.intp)
        nu = np.ascontiguousarray(self.nu, dtype=np.intp)
        if perms.ndim != 2:
            raise ValueError("perms must be a (m-1, n) array")
        _check_permutation(perms, perms.shape[1], "perms")
        _check_permutation(nu, perms.shape[0] + 1, "nu")
        perms.flags.writeable = False
        nu.flags.writeable = False
        object.__setattr__(self, "perms", perms)
        object.__setattr__(self, "nu", nu)

    @property
    def m(self):
        return self.perms.shape[0] + 1

    @property
    def n(self):
        return self.perms.shape[1]

    @classmethod
    def generate(cls, n, m, seed):
        """Draw m-1 uniform permutations of 0..n-1, then nu on 0..m-1."""
        if m < 2:
            raise ValueError("m must be at least 2")
        if n < 1:
            raise ValueError("n must be positive")
        rng = np.random.default_rng(seed)
        perms = np.empty((m - 1, n), dtype=np.intp)
        for i in range(m - 1):
            perms[i] = rng.permutation(n)
        nu = rng.permutation(m).astype(np.intp)
        return cls(perms, nu, seed)


@dataclass(frozen=True)
class ScopeConfig:
    """Region parameters: rank threshold m-r gives coverage 1 - r/m."""

    m: int
    r: int
    standardize_residuals: bool = False

    def __post_init__(self):
        if not (self.m > self.r > 0):
            raise ValueError(f"need m > r > 0, got m={self.m}, r={self.r}")

    @property
    def coverage(self):
        return 1.0 - self.r / self.m


@dataclass(frozen=True)
class RankField:
    """Rank and membership evaluated over a list of parameter points."""

    points: tuple
    config: ScopeConfig

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


class RegionEvaluator:
    """One region: a sample plus its frozen PermutationSet.

    Precomputes the stacked permutation matrix (identity first) so repeated
    rank queries share it; the identity row goes through the same kernel as
    the perturbed rows, which keeps the m statistics exchangeable at the
    floating-point level.
    """

    def __init__(self, sample, perms, config):
        if perms.n != sample.n:
            raise ValueError(
                f"PermutationSet built for n={perms.n}, sample has n={sample.n}"
            )
        if perms.m != config.m:
            raise ValueError(f"PermutationSet has m={perms.m}, config m={config.m}")
        self.sample = sample
        self.perms = perms
        self.config = config
        self._stacked = np.vstack(
            [np.arange(sample.n, dtype=np.intp)[None, :], perms.perms]
        )

    def statistics(self, theta):
        """Squared norms (||B(theta, pi_0)||^2, ..., ||B(theta, pi_{m-1})||^2)."""
        eps = residuals(theta, self.sample)
        if self.config.standardize_residuals:
            eps = standardize(eps)
        b = kernels.perturbed_scores(
            theta.omega,
            np.asarray(theta.alphas),
            np.asarray(theta.betas),
            eps * eps,
            self._stacked,
            self.sample.presample_sq,
            self.sample.initial_variances,
        )
        return np.einsum("ij,ij->i", b, b)

    def rank(self, theta):
        z = self.statistics(theta)
        nu = self.perms.nu
        beats = (z[0] > z[1:]) | ((z[0] == z[1:]) & (nu[0] > nu[1:]))
        return 1 + int(beats.sum())

    def contains(self, theta):
        return self.rank(theta) <= self.config.m - self.config.r


def perturbed_score(theta, sample, perm, config=None):
    """Score vector of the trajectory rebuilt with permuted residuals.

    ``perm`` maps time slots to residual indices (0-based); the identity
    permutation reproduces the plain score of the sample.
    """
    eps = residuals(theta, sample)
    if config is not None and config.standardize_residuals:
        eps = standardize(eps)
    perm = np.ascontiguousarray(perm, dtype=np.intp)
    _check_permutation(perm, sample.n, "perm")
    out = kernels.perturbed_scores(
        theta.omega,
        np.asarray(theta.alphas),
        np.asarray(theta.betas),
        eps * eps,
        perm[None, :],
        sample.presample_sq,
        sample.initial_variances,
    )
    return out[0]


def rank(theta, sample, perms, config):
    """Rank of the observed score's squared norm under the tie-broken order."""
    return RegionEvaluator(sample, perms, config).rank(theta)


def in_region(theta, sample, perms, config):
    """Membership test: rank(theta) <= m - r."""
    return RegionEvaluator(sample, perms, config).contains(theta)


def rank_field(sample, grid, perms, config):
    """Evaluate rank at every grid point with the same PermutationSet."""
    evaluator = RegionEvaluator(sample, perms, config)
    cutoff = config.m - config.r
    points = []
    for theta in grid:
        rk = evaluator.rank(theta)
        points.append((theta, rk, rk <= cutoff))
    return RankField(points=tuple(points), config=config)
