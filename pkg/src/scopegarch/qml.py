"""Quasi-maximum-likelihood estimation.

The objective is the normalized Gaussian quasi log-likelihood

    l_n(theta) = (1/n) sum_t [ log sigma2_t(theta) + X_t^2 / sigma2_t(theta) ]

minimized over Theta = {omega > 0, alpha_i >= 0, beta_j >= 0,
sum(alpha) + sum(beta) <= 1 - margin}.  The constraints are removed by a
log/logit change of variables (omega = exp(u0), coefficient block mapped
through a capped multinomial logit), after which L-BFGS-B plus a short
Newton polish on the analytic score does the work.  Initial variances and
presample squares are treated as known constants throughout, so the
analytic score below is the exact gradient of the objective.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.optimize

from ._backend import kernels
from .errors import DegenerateData, DidNotConverge, SingularInformation
from .garch import ModelOrders, ParamVector, standardize

__all__ = [
    "OptimizerConfig",
    "QmlFit",
    "CovarianceEstimate",
    "neg_quasi_loglik",
    "score",
    "qmle_fit",
    "asymptotic_covariance",
]

# Bounds for the unconstrained coordinates: wide enough to park a coefficient
# numerically on the boundary of Theta, tight enough that exp() cannot overflow.
_V_BOUND = 35.0
_U0_MAX = 50.0


def _kernel_args(theta, sample):
    sample.check_orders(theta)
    return (
        theta.omega,
        np.asarray(theta.alphas),
        np.asarray(theta.betas),
        sample.observations * sample.observations,
        sample.presample_sq,
        sample.initial_variances,
    )


def neg_quasi_loglik(theta, sample):
    """Value of l_n(theta) on the sample."""
    value, _ = kernels.loglik_and_score(*_kernel_args(theta, sample))
    return value


def score(theta, sample):
    """Analytic gradient of neg_quasi_loglik in (omega, alphas, betas)."""
    _, grad = kernels.loglik_and_score(*_kernel_args(theta, sample))
    return grad


@dataclass(frozen=True)
class OptimizerConfig:
    """Settings for qmle_fit.

    ``starts`` lists (alpha-mass, beta-mass) pairs; each is expanded to a
    feasible starting point with the mass spread evenly across its block and
    omega chosen so the implied unconditional variance matches the sample
    variance.  The first entry is the constant-variance start.  ``lean``
    switches to a single warm start with no Newton polish, used for
    bootstrap refits where only the attained objective value matters.
    """

    score_tol: float = 1e-8
    max_iter: int = 500
    margin: float = 1e-4
    omega_min: float = 1e-10
    polish_steps: int = 40
    starts: tuple = (
        (0.005, 0.005),
        (0.05, 0.90),
        (0.10, 0.80),
        (0.30, 0.50),
        (0.45, 0.30),
    )
    lean: bool = False


@dataclass(frozen=True)
class QmlFit:
    theta_hat: ParamVector
    neg_loglik: float
    score_norm: float
    converged: bool
    iterations: int


@dataclass(frozen=True)
class CovarianceEstimate:
    gamma: np.ndarray
    kurtosis_hat: float


def _to_unconstrained(theta, margin):
    cap = 1.0 - margin
    c = np.asarray(theta.alphas + theta.betas)
    # exact zeros sit at -inf in logit space; nudge them just inside
    c = np.clip(c, 1e-12, None)
    total = c.sum()
    if total >= cap:
        c *= cap * (1.0 - 1e-8) / total
        total = c.sum()
    t = total / (cap - total)
    w = c * (1.0 + t) / cap
    u = np.empty(1 + c.shape[0])
    u[0] = math.log(theta.omega)
    u[1:] = np.log(w)
    return np.clip(u, [-math.inf] + [-_V_BOUND] * c.shape[0], None)


def _from_unconstrained(u, p, margin):
    omega = math.exp(u[0])
    w = np.exp(u[1:])
    c = (1.0 - margin) * w / (1.0 + w.sum())
    return omega, c[:p], c[p:]


def _eval(u, p, margin, obs_sq, presample_sq, init_vars):
    """Objective value, gradient in u-coordinates, gradient in theta."""
    omega, alphas, betas = _from_unconstrained(u, p, margin)
    value, g = kernels.loglik_and_score(
        omega, alphas, betas, obs_sq, presample_sq, init_vars
    )
    gu = np.empty_like(u)
    gu[0] = g[0] * omega
    c = np.concatenate((alphas, betas))
    gc = g[1:]
    # Jacobian of the logit map: dc_i/dv_j = c_i delta_ij - c_i c_j / cap
    gu[1:] = c * gc - c * (c @ gc / (1.0 - margin))
    return value, gu, g


def _objective(u, *args):
    value, gu, _ = _eval(u, *args)
    return value, gu


def _start_points(orders, svar, config):
    points = []
    seen = set()
    for a_mass, b_mass in config.starts:
        a = a_mass if orders.p else 0.0
        b = b_mass if orders.q else 0.0
        key = (round(a, 6), round(b, 6))
        if key in seen:
            continue
        seen.add(key)
        omega0 = max(svar * (1.0 - a - b), 1e-8)
        points.append(
            ParamVector(
                omega0,
                (a / orders.p,) * orders.p if orders.p else (),
                (b / orders.q,) * orders.q if orders.q else (),
            )
        )
    return points


def _newton_polish(u, args, target, omega_floor, budget):
    """Damped Newton on the reparameterized gradient.

    L-BFGS-B reliably lands within ~1e-6 of the optimum; the convergence
    tolerance on the score is far tighter, and a few Newton steps on the
    analytic gradient (Hessian by central differences) close the gap.  Stops
    once the theta-space score drops below ``target`` or progress stalls.
    """
    value, gu, g = _eval(u, *args)
    h = 1e-5
    d = u.shape[0]
    for _ in range(budget):
        if np.abs(g).max() <= target:
            break
        gnorm = np.abs(gu).max()
        hess = np.empty((d, d))
        for j in range(d):
            step = np.zeros(d)
            step[j] = h
            _, g_plus, _ = _eval(u + step, *args)
            _, g_minus, _ = _eval(u - step, *args)
            hess[:, j] = (g_plus - g_minus) / (2.0 * h)
        hess = 0.5 * (hess + hess.T)
        try:
            delta = np.linalg.solve(hess, -gu)
        except np.linalg.LinAlgError:
            delta, *_ = np.linalg.lstsq(hess, -gu, rcond=None)
        if not np.all(np.isfinite(delta)):
            break
        improved = False
        scale = 1.0
        for _ in range(12):
            u_try = u + scale * delta
            u_try[0] = min(max(u_try[0], omega_floor), _U0_MAX)
            u_try[1:] = np.clip(u_try[1:], -_V_BOUND, _V_BOUND)
            v_try, gu_try, g_try = _eval(u_try, *args)
            if np.abs(gu_try).max() < gnorm or v_try < value:
                u, value, gu, g = u_try, v_try, gu_try, g_try
                improved = True
                break
            scale *= 0.5
        if not improved:
            break
    return u


def qmle_fit(sample, orders, config=None, start=None, require_convergence=False):
    """Constrained QMLE via reparameterized quasi-Newton with multi-start.

    ``start`` (a ParamVector) replaces the deterministic start list with a
    single warm start.  When ``require_convergence`` is set, a fit whose
    score exceeds the tolerance raises DidNotConverge with the best iterate
    attached; otherwise the fit is returned with converged=False.
    """
    if config is None:
        config = OptimizerConfig()
    if not isinstance(orders, ModelOrders):
        orders = ModelOrders(*orders)
    if sample.n <= orders.d:
        raise DegenerateData(f"need more than d={orders.d} observations, got {sample.n}")
    obs = sample.observations
    svar = float(obs.var())
    if svar == 0.0:
        raise DegenerateData("constant series carries no variance information")

    obs_sq = obs * obs
    args = (orders.p, config.margin, obs_sq, sample.presample_sq, sample.initial_variances)
    if start is not None:
        # warm-start fast path: an already-optimal start is a fixed point
        value, grad = kernels.loglik_and_score(
            start.omega, np.asarray(start.alphas), np.asarray(start.betas),
            obs_sq, sample.presample_sq, sample.initial_variances,
        )
        score_norm = float(np.abs(grad).max())
        if score_norm <= config.score_tol:
            return QmlFit(start, float(value), score_norm, True, 0)
        starts = [start]
    else:
        starts = _start_points(orders, svar, config)
        if config.lean:
            starts = starts[:1]

    bounds = [(math.log(config.omega_min), _U0_MAX)] + [(-_V_BOUND, _V_BOUND)] * (
        orders.p + orders.q
    )
    best_u = None
    best_value = math.inf
    iterations = 0
    for theta0 in starts:
        u0 = np.clip(
            _to_unconstrained(theta0, config.margin),
            [b[0] for b in bounds],
            [b[1] for b in bounds],
        )
        result = scipy.optimize.minimize(
            _objective,
            u0,
            args=args,
            jac=True,
            method="L-BFGS-B",
            bounds=bounds,
            options={"maxiter": config.max_iter, "ftol": 1e-16, "gtol": 1e-12},
        )
        iterations += int(result.nit)
        if result.fun < best_value:
            best_value = float(result.fun)
            best_u = result.x

    if best_u is None:  # pragma: no cover - minimize always returns an iterate
        raise DidNotConverge("optimizer returned no iterate")

    if not config.lean and config.polish_steps > 0:
        best_u = _newton_polish(
            best_u,
            args,
            target=0.25 * config.score_tol,
            omega_floor=math.log(config.omega_min),
            budget=config.polish_steps,
        )

    omega, alphas, betas = _from_unconstrained(best_u, orders.p, config.margin)
    theta_hat = ParamVector(omega, alphas, betas)
    value, grad = kernels.loglik_and_score(
        omega, np.asarray(alphas), np.asarray(betas),
        obs_sq, sample.presample_sq, sample.initial_variances,
    )
    score_norm = float(np.abs(grad).max())
    fit = QmlFit(
        theta_hat=theta_hat,
        neg_loglik=float(value),
        score_norm=score_norm,
        converged=score_norm <= config.score_tol,
        iterations=iterations,
    )
    if require_convergence and not fit.converged:
        raise DidNotConverge(
            f"score norm {score_norm:.3e} above tolerance {config.score_tol:.1e}", fit=fit
        )
    return fit


def asymptotic_covariance(theta_hat, sample):
    """Plug-in covariance Gamma_n = (kappa_hat - 1) * J_hat^{-1}.

    J_hat is the outer-product information (1/n) sum (1/sigma^4) dsigma2 dsigma2'
    and kappa_hat the fourth moment of the standardized residuals.  Degenerate
    noise (kappa_hat <= 1) and singular J_hat both raise SingularInformation.
    """
    sig2, g = kernels.weighted_gradients(*_kernel_args(theta_hat, sample))
    n = sample.n
    j_hat = g.T @ g / n
    eps = sample.observations / np.sqrt(sig2)
    eps_std = standardize(eps)
    kappa = float(np.mean(eps_std**4))
    if kappa <= 1.0 + 1e-6:
        raise SingularInformation(
            f"residual fourth moment {kappa:.6f} is degenerate (two-point noise)"
        )
    try:
        cho = scipy.linalg.cho_factor(j_hat)
        j_inv = scipy.linalg.cho_solve(cho, np.eye(j_hat.shape[0]))
    except scipy.linalg.LinAlgError as exc:
        raise SingularInformation(f"information matrix not invertible: {exc}") from exc
    gamma = (kappa - 1.0) * 0.5 * (j_inv + j_inv.T)
    return CovarianceEstimate(gamma=gamma, kurtosis_hat=kappa)
