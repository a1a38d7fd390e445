"""Monte Carlo coverage and relative-area experiments.

Each trial simulates a fresh trajectory at the data-generating parameter,
builds one region by the requested method, and records whether the truth is
a member.  Region size is measured as the fraction of points, drawn
uniformly from the unit-variance slice of the stationarity triangle, that
the region contains.

Trial k derives all of its randomness from SeedSequence((seed, k)), so
reports are reproducible and independent of execution order.
"""

import math
from dataclasses import dataclass

import numpy as np

from .baselines import (
    asymptotic_region,
    bootstrap_region_membership,
    lr_bootstrap_pvalue,
    residual_bootstrap,
)
from .errors import (
    ConfigError,
    DataError,
    DidNotConverge,
    NumericalError,
)
from .garch import ParamVector, SeriesSample, initial_values, simulate
from .qml import asymptotic_covariance, qmle_fit
from .scope import PermutationSet, RegionEvaluator, ScopeConfig

__all__ = [
    "METHODS",
    "NoiseSpec",
    "CoverageReport",
    "generate_noise",
    "make_trial_sample",
    "sample_unit_variance_slice",
    "relative_area",
    "empirical_coverage",
]

METHODS = ("scope", "asym_ellipsoid", "res_bootstrap", "lr_bootstrap")

_FAMILIES = ("gaussian", "logistic", "laplace", "student_t")


@dataclass(frozen=True)
class NoiseSpec:
    """Zero-mean noise family, scaled to unit variance when it exists.

    ``student_t`` with df <= 2 has no finite variance and is left on its
    natural scale; ``infinite_variance`` flags that case so experiments can
    label it honestly instead of pretending to standardize.
    """

    family: str
    df: float = float("nan")

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(
                f"unknown noise family {self.family!r}; choose from {_FAMILIES}"
            )
        if self.family == "student_t":
            if not (self.df > 0):
                raise ValueError("student_t noise needs df > 0")
        elif not math.isnan(self.df):
            raise ValueError(f"df is only meaningful for student_t, got {self.df}")

    @property
    def infinite_variance(self):
        return self.family == "student_t" and self.df <= 2.0

    def draw(self, rng, size):
        if self.family == "gaussian":
            return rng.standard_normal(size)
        if self.family == "logistic":
            return rng.logistic(0.0, math.sqrt(3.0) / math.pi, size)
        if self.family == "laplace":
            return rng.laplace(0.0, 1.0 / math.sqrt(2.0), size)
        draws = rng.standard_t(self.df, size)
        if self.df > 2.0:
            draws /= math.sqrt(self.df / (self.df - 2.0))
        return draws


def generate_noise(spec, n, seed):
    """Draw n noise variates from the spec's family."""
    return spec.draw(np.random.default_rng(seed), n)


@dataclass(frozen=True)
class CoverageReport:
    """Outcome of a coverage experiment, with its full configuration echo."""

    method: str
    trials: int
    hits: int
    empirical_coverage: float
    relative_area: object
    area_samples: int
    seed: int
    config: dict
    failures: int = 0

    def to_dict(self):
        return {
            "method": self.method,
            "trials": self.trials,
            "hits": self.hits,
            "empirical_coverage": self.empirical_coverage,
            "relative_area": self.relative_area,
            "area_samples": self.area_samples,
            "seed": self.seed,
            "failures": self.failures,
            "config": self.config,
        }


def _trial_rng(seed, index, stream):
    """Deterministic per-trial generator, independent of trial order."""
    return np.random.default_rng(np.random.SeedSequence((seed, index, stream)))


def _trial_int_seed(seed, index, stream):
    """64-bit integer sub-seed for interfaces that XOR in a replication index."""
    ss = np.random.SeedSequence((seed, index, stream))
    return int(ss.generate_state(1, np.uint64)[0])


def make_trial_sample(theta_star, noise_spec, n, rng, burn_in=0, init="unconditional"):
    """Simulate one trajectory and package it the way an experimenter sees it.

    With ``burn_in > 0`` the recursion is warmed up and the pre-burn-in
    stretch discarded.  The observed squared values entering the sample
    window are kept (they are data), but the variance state is not
    observable, so the sample's initial variances are reset to the
    stationary-start convention at theta_star.  The inference methods are
    therefore run with initial values that differ from the ones that
    generated the data -- deliberately, to measure robustness to that
    assumption.
    """
    noise = noise_spec.draw(rng, n + burn_in)
    sample = simulate(theta_star, noise, init=init, burn_in=burn_in)
    if burn_in > 0:
        _, init_vars = initial_values(theta_star, init)
        sample = SeriesSample(
            observations=sample.observations,
            presample_sq=sample.presample_sq,
            initial_variances=init_vars,
        )
    return sample


def sample_unit_variance_slice(rng):
    """Uniform draw from {alpha, beta >= 0, alpha + beta < 1}, omega = 1-alpha-beta.

    The slice fixes the long-run variance at one, so a region's share of it
    is comparable across methods.  Only for (p, q) = (1, 1).
    """
    while True:
        a = rng.random()
        b = rng.random()
        if a + b > 1.0:
            a, b = 1.0 - a, 1.0 - b
        omega = 1.0 - a - b
        if omega > 1e-12:
            return ParamVector(omega=omega, alphas=(a,), betas=(b,))


def relative_area(member, sampler, area_samples, rng):
    """Fraction of sampled parameters the membership predicate accepts."""
    if area_samples < 1:
        raise ValueError("area_samples must be positive")
    hits = 0
    for _ in range(area_samples):
        if member(sampler(rng)):
            hits += 1
    return hits / area_samples


def _scope_trial(theta_star, sample, seed, index, m, r, standardize_residuals):
    perms = PermutationSet.generate(
        sample.n, m, seed=np.random.SeedSequence((seed, index, 1))
    )
    config = ScopeConfig(m=m, r=r, standardize_residuals=standardize_residuals)
    region = RegionEvaluator(sample, perms, config)
    return region.contains(theta_star), region.contains


def _ellipsoid_trial(theta_star, sample, level):
    fit = qmle_fit(sample, theta_star.orders)
    cov = asymptotic_covariance(fit.theta_hat, sample)
    ell = asymptotic_region(fit, cov, level, sample.n)
    return ell.contains(theta_star), ell.contains


def _res_bootstrap_trial(theta_star, sample, seed, index, level, b):
    fit = qmle_fit(sample, theta_star.orders)
    boots = residual_bootstrap(sample, fit, b, _trial_int_seed(seed, index, 1))
    member = lambda theta: bootstrap_region_membership(theta, boots, level)
    return member(theta_star), member


def _lr_bootstrap_trial(theta_star, sample, seed, index, level, b):
    fit = qmle_fit(sample, theta_star.orders)
    sub_seed = _trial_int_seed(seed, index, 1)
    member = lambda theta: (
        lr_bootstrap_pvalue(theta, sample, b, sub_seed, fit=fit) > 1.0 - level
    )
    return member(theta_star), member


def empirical_coverage(
    method,
    theta_star,
    noise,
    n,
    trials,
    seed,
    burn_in=0,
    m=None,
    r=None,
    level=0.90,
    bootstrap_b=100,
    area_samples=0,
    standardize_residuals=False,
    init="unconditional",
    failure_limit=0.10,
):
    """Monte Carlo coverage (and optionally relative area) of one method.

    Returns a CoverageReport whose ``empirical_coverage`` is hits divided by
    completed trials.  Trials that fail numerically (a refit that does not
    converge, a singular information matrix) are skipped and counted; more
    than ``failure_limit`` of them aborts the experiment.
    """
    if method not in METHODS:
        raise ConfigError(f"unknown method {method!r}; choose from {METHODS}")
    if trials < 1:
        raise ConfigError("trials must be positive")
    if area_samples < 0:
        raise ConfigError("area_samples must be non-negative")
    if method == "scope":
        if m is None or r is None:
            raise ConfigError("method 'scope' needs m and r")
        ScopeConfig(m=m, r=r)  # validate early
    seed = int(seed)

    hits = 0
    completed = 0
    failures = 0
    area_hits = 0
    area_total = 0
    for index in range(trials):
        sample = make_trial_sample(
            theta_star, noise, n, _trial_rng(seed, index, 0), burn_in, init
        )
        try:
            if method == "scope":
                covered, member = _scope_trial(
                    theta_star, sample, seed, index, m, r, standardize_residuals
                )
            elif method == "asym_ellipsoid":
                covered, member = _ellipsoid_trial(theta_star, sample, level)
            elif method == "res_bootstrap":
                covered, member = _res_bootstrap_trial(
                    theta_star, sample, seed, index, level, bootstrap_b
                )
            else:
                covered, member = _lr_bootstrap_trial(
                    theta_star, sample, seed, index, level, bootstrap_b
                )
            trial_area_hits = 0
            if area_samples > 0:
                area_rng = _trial_rng(seed, index, 2)
                for _ in range(area_samples):
                    trial_area_hits += bool(member(sample_unit_variance_slice(area_rng)))
        except (DataError, NumericalError, DidNotConverge):
            failures += 1
            continue
        completed += 1
        hits += bool(covered)
        area_hits += trial_area_hits
        area_total += area_samples
    if completed == 0 or failures > failure_limit * trials:
        raise NumericalError(
            f"{failures} of {trials} trials failed (limit {failure_limit:.0%})"
        )

    config = {
        "method": method,
        "theta_star": {
            "omega": theta_star.omega,
            "alphas": list(theta_star.alphas),
            "betas": list(theta_star.betas),
        },
        "noise": {"family": noise.family}
        | ({"df": noise.df} if noise.family == "student_t" else {}),
        "n": n,
        "trials": trials,
        "burn_in": burn_in,
        "m": m,
        "r": r,
        "level": level,
        "bootstrap_b": bootstrap_b,
        "area_samples": area_samples,
        "standardize_residuals": standardize_residuals,
        "init": init,
    }
    return CoverageReport(
        method=method,
        trials=completed,
        hits=hits,
        empirical_coverage=hits / completed,
        relative_area=(area_hits / area_total) if area_total else None,
        area_samples=area_total,
        seed=seed,
        config=config,
        failures=failures,
    )
