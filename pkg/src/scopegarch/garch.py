"""GARCH(p,q) model primitives.

Parameter vectors, observed samples with their initial conditions, the
conditional variance recursion, trajectory simulation, and residual
reconstruction.  Everything here is a pure function of its inputs; the
sequential recursions live in the selected backend kernels.
"""

from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import DegenerateSample, DimensionMismatch, NotStationary

__all__ = [
    "ModelOrders",
    "ParamVector",
    "SeriesSample",
    "variance_path",
    "simulate",
    "residuals",
    "standardize",
    "unconditional_variance",
    "initial_values",
]


def _float_vector(values, name, writeable=False):
    arr = np.ascontiguousarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    arr.flags.writeable = writeable
    return arr


@dataclass(frozen=True)
class ModelOrders:
    """ARCH order p and GARCH order q; p = q = 0 is rejected."""

    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0 or int(self.p) != self.p or int(self.q) != self.q:
            raise ValueError("orders must be nonnegative integers")
        if self.p == 0 and self.q == 0:
            raise ValueError("degenerate model: p and q cannot both be zero")

    @property
    def d(self):
        return 1 + self.p + self.q


@dataclass(frozen=True)
class ParamVector:
    """Point theta = (omega, alpha_1..alpha_p, beta_1..beta_q).

    Nonnegativity and omega > 0 are enforced; stationarity is queryable via
    is_stationary() but deliberately not enforced, since the region
    construction remains valid for non-stationary parameters.
    """

    omega: float
    alphas: tuple
    betas: tuple

    def __post_init__(self):
        object.__setattr__(self, "omega", float(self.omega))
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))
        if not np.isfinite(self.omega) or self.omega <= 0.0:
            raise ValueError("omega must be positive and finite")
        for name, coefs in (("alphas", self.alphas), ("betas", self.betas)):
            for c in coefs:
                if not np.isfinite(c) or c < 0.0:
                    raise ValueError(f"{name} must be nonnegative and finite")
        ModelOrders(len(self.alphas), len(self.betas))

    @property
    def orders(self):
        return ModelOrders(len(self.alphas), len(self.betas))

    @property
    def d(self):
        return 1 + len(self.alphas) + len(self.betas)

    @property
    def coef_sum(self):
        return sum(self.alphas) + sum(self.betas)

    def is_stationary(self, margin=0.0):
        return self.coef_sum < 1.0 - margin

    def as_array(self):
        return np.array((self.omega, *self.alphas, *self.betas))

    @classmethod
    def from_array(cls, values, orders):
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (orders.d,):
            raise DimensionMismatch("values", orders.d, values.shape[0])
        return cls(values[0], values[1 : 1 + orders.p], values[1 + orders.p :])


@dataclass(frozen=True)
class SeriesSample:
    """Observed trajectory plus the known initial conditions.

    presample_sq holds (X_0^2, X_{-1}^2, ..., X_{1-p}^2), most recent first;
    initial_variances holds (sigma_0^2, ..., sigma_{1-q}^2) in the same order.
    Carrying these values is what makes assumption (P2) checkable: every
    recursion downstream is seeded with exactly these numbers.
    """

    observations: np.ndarray
    presample_sq: np.ndarray
    initial_variances: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "observations", _float_vector(self.observations, "observations")
        )
        object.__setattr__(
            self, "presample_sq", _float_vector(self.presample_sq, "presample_sq")
        )
        object.__setattr__(
            self,
            "initial_variances",
            _float_vector(self.initial_variances, "initial_variances"),
        )
        if self.observations.shape[0] < 1:
            raise ValueError("observations must be nonempty")
        if np.any(self.presample_sq < 0.0):
            raise ValueError("presample_sq entries must be nonnegative")
        if np.any(self.initial_variances <= 0.0):
            raise ValueError("initial_variances entries must be positive")

    @property
    def n(self):
        return self.observations.shape[0]

    def check_orders(self, theta):
        p, q = len(theta.alphas), len(theta.betas)
        if self.presample_sq.shape[0] != p:
            raise DimensionMismatch("presample_sq", p, self.presample_sq.shape[0])
        if self.initial_variances.shape[0] != q:
            raise DimensionMismatch(
                "initial_variances", q, self.initial_variances.shape[0]
            )


def unconditional_variance(theta):
    """Long-run variance omega / (1 - sum(alphas) - sum(betas))."""
    if not theta.is_stationary():
        raise NotStationary(
            f"sum of coefficients {theta.coef_sum} is not below 1; "
            "no unconditional variance exists"
        )
    return theta.omega / (1.0 - theta.coef_sum)


def initial_values(theta, init="unconditional"):
    """Resolve an initial-condition convention into concrete arrays.

    ``init`` is "unconditional" (presample squares and variances set to the
    unconditional variance of theta), "omega" (set to omega), or an explicit
    pair (presample_sq, initial_variances).
    """
    p, q = len(theta.alphas), len(theta.betas)
    if init == "unconditional":
        v = unconditional_variance(theta)
        return np.full(p, v), np.full(q, v)
    if init == "omega":
        return np.full(p, theta.omega), np.full(q, theta.omega)
    presample_sq, init_vars = init
    presample_sq = _float_vector(presample_sq, "presample_sq", writeable=True)
    init_vars = _float_vector(init_vars, "initial_variances", writeable=True)
    if presample_sq.shape[0] != p:
        raise DimensionMismatch("presample_sq", p, presample_sq.shape[0])
    if init_vars.shape[0] != q:
        raise DimensionMismatch("initial_variances", q, init_vars.shape[0])
    return presample_sq, init_vars


def variance_path(theta, sample):
    """Conditional variances sigma^2_t(theta) for t = 1..n."""
    sample.check_orders(theta)
    return kernels.variance_path(
        theta.omega,
        np.asarray(theta.alphas),
        np.asarray(theta.betas),
        sample.observations * sample.observations,
        sample.presample_sq,
        sample.initial_variances,
    )


def simulate(theta, noise, init="unconditional", burn_in=0):
    """Generate a SeriesSample driven by the given noise vector.

    ``noise`` must hold burn_in + n values; the first burn_in outputs are
    discarded and the squared-output / variance tails they leave behind
    become the sample's presample_sq and initial_variances.  With burn_in=0
    the resolved ``init`` values are carried verbatim, so (P2) holds exactly.
    """
    noise = _float_vector(noise, "noise", writeable=True)
    if burn_in < 0 or burn_in >= noise.shape[0]:
        raise ValueError("burn_in must satisfy 0 <= burn_in < len(noise)")
    presample_sq, init_vars = initial_values(theta, init)
    x, sig2 = kernels.simulate_path(
        theta.omega,
        np.asarray(theta.alphas),
        np.asarray(theta.betas),
        noise,
        presample_sq,
        init_vars,
    )
    p, q = len(theta.alphas), len(theta.betas)
    out_pre = np.empty(p)
    for k in range(p):
        idx = burn_in - 1 - k
        out_pre[k] = x[idx] * x[idx] if idx >= 0 else presample_sq[k - burn_in]
    out_init = np.empty(q)
    for k in range(q):
        idx = burn_in - 1 - k
        out_init[k] = sig2[idx] if idx >= 0 else init_vars[k - burn_in]
    return SeriesSample(x[burn_in:], out_pre, out_init)


def residuals(theta, sample):
    """Reconstructed innovations X_t / sigma_t(theta)."""
    return sample.observations / np.sqrt(variance_path(theta, sample))


def standardize(values):
    """Center and scale to mean 0, variance 1 (population denominator)."""
    values = np.asarray(values, dtype=np.float64)
    if values.shape[0] < 2:
        raise DegenerateSample("need at least two values to standardize")
    sd = values.std()
    if sd == 0.0 or not np.isfinite(sd):
        raise DegenerateSample("constant input cannot be standardized")
    return (values - values.mean()) / sd
