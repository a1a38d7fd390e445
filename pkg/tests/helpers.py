"""Shared oracles and instance generators for the test suite.

Everything here recomputes expected values independently of the library's
kernels: plain-Python recursions, central finite differences, and closed-form
special functions, so the tests compare two separate derivations.
"""

import math

import numpy as np

from scopegarch import ParamVector, SeriesSample, neg_quasi_loglik, simulate


def random_interior_theta(rng, p, q, coef_floor=0.02):
    """Random stationary theta with every coefficient bounded away from 0.

    Keeping the coefficients >= coef_floor leaves room for central finite
    differences (h = 1e-6) without stepping outside the admissible set.
    """
    k = p + q
    omega = float(rng.uniform(0.05, 2.0))
    if k == 0:
        return ParamVector(omega, (), ())
    raw = rng.uniform(0.2, 1.0, size=k)
    mass = rng.uniform(0.2, 0.9)
    coefs = raw / raw.sum() * mass
    coefs = np.maximum(coefs, coef_floor)
    if coefs.sum() >= 0.95:
        coefs *= 0.95 / coefs.sum()
    return ParamVector(omega, tuple(coefs[:p]), tuple(coefs[p:]))


def random_instance(rng, p, q, n=50):
    """Random (theta, sample) pair with the sample simulated at theta."""
    theta = random_interior_theta(rng, p, q)
    noise = rng.standard_normal(n)
    sample = simulate(theta, noise)
    return theta, sample


def reference_variance_path(theta, sample):
    """Scalar-Python recursion for sigma^2_t, independent of the kernels."""
    p, q = len(theta.alphas), len(theta.betas)
    x_sq = [float(v) ** 2 for v in sample.observations]
    pre = list(sample.presample_sq)
    init = list(sample.initial_variances)
    out = []
    for t in range(len(x_sq)):
        s = theta.omega
        for i in range(p):
            lag = t - 1 - i  # index into x_sq, or presample when negative
            s += theta.alphas[i] * (x_sq[lag] if lag >= 0 else pre[-lag - 1])
        for j in range(q):
            lag = t - 1 - j
            s += theta.betas[j] * (out[lag] if lag >= 0 else init[-lag - 1])
        out.append(s)
    return np.array(out)


def fd_score(theta, sample, h=1e-6):
    """Central-difference gradient of neg_quasi_loglik in (omega, a..., b...)."""
    base = theta.as_array()
    p = len(theta.alphas)
    grad = np.empty(base.shape[0])
    for k in range(base.shape[0]):
        up, down = base.copy(), base.copy()
        up[k] += h
        down[k] -= h
        t_up = ParamVector(up[0], tuple(up[1 : 1 + p]), tuple(up[1 + p :]))
        t_dn = ParamVector(down[0], tuple(down[1 : 1 + p]), tuple(down[1 + p :]))
        grad[k] = (neg_quasi_loglik(t_up, sample) - neg_quasi_loglik(t_dn, sample)) / (
            2.0 * h
        )
    return grad


def chi2_quantile_by_bisection(level, df=3):
    """Quantile of chi-square(3) via its closed-form CDF and bisection.

    For df = 3 the CDF is F(x) = erf(sqrt(x/2)) - sqrt(2/pi) * sqrt(x) *
    exp(-x/2); only df = 3 is supported, which is all the tests need.
    """
    if df != 3:
        raise ValueError("closed-form CDF implemented for df=3 only")

    def cdf(x):
        return math.erf(math.sqrt(x / 2.0)) - math.sqrt(2.0 / math.pi) * math.sqrt(
            x
        ) * math.exp(-x / 2.0)

    lo, hi = 0.0, 60.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if cdf(mid) < level:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def build_sample(observations, presample_sq=(), initial_variances=()):
    return SeriesSample(
        np.asarray(observations, dtype=float),
        np.asarray(presample_sq, dtype=float),
        np.asarray(initial_variances, dtype=float),
    )
