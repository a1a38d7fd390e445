"""Pure Python/NumPy recursion kernels.

Reference implementation of the backend contract; scopegarch._kernels is the
compiled twin.  Both must stay interchangeable, so every accumulation below
is written in the same order as the C loops (scalar sums over lags, time
outermost) and differences between the two stay at rounding level.

Index convention shared by all kernels: extended arrays hold the presample
block reversed at the front, so for 1-based time t,

    xsq_ext[p + t - 1]  is X_t^2   (t = 1-p .. n)
    sig_ext[q + t - 1]  is sigma_t^2  (t = 1-q .. n)

presample_sq is ordered most recent first (X_0^2, X_{-1}^2, ...), likewise
initial_variances, which is why the front blocks are reversed copies.
"""

from math import log, sqrt

import numpy as np

compiled = False


def _extend(front, rest_len):
    out = np.empty(front.shape[0] + rest_len)
    out[: front.shape[0]] = front[::-1]
    return out


def variance_path(omega, alphas, betas, obs_sq, presample_sq, init_vars):
    """Conditional variance recursion over the observed squares."""
    n = obs_sq.shape[0]
    p = alphas.shape[0]
    q = betas.shape[0]
    xsq = _extend(presample_sq, n)
    xsq[p:] = obs_sq
    sig = _extend(init_vars, n)
    for s in range(n):
        v = omega
        for i in range(p):
            v = v + alphas[i] * xsq[p + s - 1 - i]
        for j in range(q):
            v = v + betas[j] * sig[q + s - 1 - j]
        sig[q + s] = v
    return sig[q:]


def simulate_path(omega, alphas, betas, noise, presample_sq, init_vars):
    """Generate (x, sigma2) trajectories driven by the given noise."""
    total = noise.shape[0]
    p = alphas.shape[0]
    q = betas.shape[0]
    xsq = _extend(presample_sq, total)
    sig = _extend(init_vars, total)
    x = np.empty(total)
    for s in range(total):
        v = omega
        for i in range(p):
            v = v + alphas[i] * xsq[p + s - 1 - i]
        for j in range(q):
            v = v + betas[j] * sig[q + s - 1 - j]
        sig[q + s] = v
        x[s] = sqrt(v) * noise[s]
        # feed the recursion the square of the emitted value, not
        # v * noise^2: downstream filters consume x*x, and the two differ
        # by an ulp, which would break exact refiltering of simulated data
        xsq[p + s] = x[s] * x[s]
    return x, sig[q:]


def loglik_and_score(omega, alphas, betas, obs_sq, presample_sq, init_vars):
    """Gaussian quasi log-likelihood objective and its analytic gradient.

    Returns ``(value, grad)`` where value is the mean of
    ``log(sigma2_t) + X_t^2 / sigma2_t`` and grad its exact gradient in the
    (omega, alphas, betas) coordinates.  Presample squares and initial
    variances are constants, so gradient rows for t <= 0 are zero.
    """
    n = obs_sq.shape[0]
    p = alphas.shape[0]
    q = betas.shape[0]
    d = 1 + p + q
    xsq = _extend(presample_sq, n)
    xsq[p:] = obs_sq
    sig = _extend(init_vars, n)
    dsig = np.zeros((q + n, d))
    grad = np.zeros(d)
    ll = 0.0
    for s in range(n):
        v = omega
        for i in range(p):
            v = v + alphas[i] * xsq[p + s - 1 - i]
        for j in range(q):
            v = v + betas[j] * sig[q + s - 1 - j]
        sig[q + s] = v
        row = dsig[q + s]
        row[0] = 1.0
        for i in range(p):
            row[1 + i] = xsq[p + s - 1 - i]
        for j in range(q):
            row[1 + p + j] = sig[q + s - 1 - j]
        for j in range(q):
            row += betas[j] * dsig[q + s - 1 - j]
        e2 = xsq[p + s] / v
        ll += log(v) + e2
        grad += ((1.0 - e2) / v) * row
    return ll / n, grad / n


def weighted_gradients(omega, alphas, betas, obs_sq, presample_sq, init_vars):
    """Variance path plus the matrix G with rows grad(sigma2_t) / sigma2_t.

    G is the building block of the information matrix (G'G / n) and of the
    score ((1 - eps_t^2) averaged against its rows).
    """
    n = obs_sq.shape[0]
    p = alphas.shape[0]
    q = betas.shape[0]
    d = 1 + p + q
    xsq = _extend(presample_sq, n)
    xsq[p:] = obs_sq
    sig = _extend(init_vars, n)
    dsig = np.zeros((q + n, d))
    g = np.empty((n, d))
    for s in range(n):
        v = omega
        for i in range(p):
            v = v + alphas[i] * xsq[p + s - 1 - i]
        for j in range(q):
            v = v + betas[j] * sig[q + s - 1 - j]
        sig[q + s] = v
        row = dsig[q + s]
        row[0] = 1.0
        for i in range(p):
            row[1 + i] = xsq[p + s - 1 - i]
        for j in range(q):
            row[1 + p + j] = sig[q + s - 1 - j]
        for j in range(q):
            row += betas[j] * dsig[q + s - 1 - j]
        g[s] = row / v
    return sig[q:], g


def perturbed_scores(omega, alphas, betas, eps_sq, perms, presample_sq, init_vars):
    """Score vectors of the permutation-rebuilt trajectories.

    For each row pi of ``perms`` the recursion rebuilds squared outputs
    xbar^2_t = sigma2_t * eps_sq[pi[t]] from the shared presample and initial
    variances, and accumulates the score evaluated on that trajectory.
    Returns a (len(perms), 1+p+q) matrix of score vectors.

    Rows are computed in lockstep across permutations; per-scalar operation
    order matches the compiled kernel's per-row loops.
    """
    k, n = perms.shape
    p = alphas.shape[0]
    q = betas.shape[0]
    d = 1 + p + q
    xsq = np.empty((k, p + n))
    xsq[:, :p] = presample_sq[::-1]
    sig = np.empty((k, q + n))
    sig[:, :q] = init_vars[::-1]
    dsig = np.zeros((k, q + n, d))
    out = np.zeros((k, d))
    row = np.empty((k, d))
    for s in range(n):
        v = np.full(k, omega)
        for i in range(p):
            v = v + alphas[i] * xsq[:, p + s - 1 - i]
        for j in range(q):
            v = v + betas[j] * sig[:, q + s - 1 - j]
        sig[:, q + s] = v
        row[:, 0] = 1.0
        for i in range(p):
            row[:, 1 + i] = xsq[:, p + s - 1 - i]
        for j in range(q):
            row[:, 1 + p + j] = sig[:, q + s - 1 - j]
        for j in range(q):
            row += betas[j] * dsig[:, q + s - 1 - j]
        dsig[:, q + s] = row
        e2 = eps_sq[perms[:, s]]
        out += ((1.0 - e2) / v)[:, None] * row
        xsq[:, p + s] = v * e2
    return out / n
