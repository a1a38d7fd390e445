# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled recursion kernels.

Operation-for-operation twin of scopegarch._kernels_py; that module documents
the index conventions and semantics.  Keep loop bodies in the same order in
both files so the backends agree to rounding error.
"""

from libc.math cimport log, sqrt

import numpy as np

compiled = True


def variance_path(double omega, const double[::1] alphas, const double[::1] betas,
                  const double[::1] obs_sq, const double[::1] presample_sq,
                  const double[::1] init_vars):
    cdef Py_ssize_t n = obs_sq.shape[0]
    cdef Py_ssize_t p = alphas.shape[0]
    cdef Py_ssize_t q = betas.shape[0]
    xsq_arr = np.empty(p + n)
    sig_arr = np.empty(q + n)
    cdef double[::1] xsq = xsq_arr
    cdef double[::1] sig = sig_arr
    cdef Py_ssize_t s, i, j
    cdef double v
    for i in range(p):
        xsq[i] = presample_sq[p - 1 - i]
    for j in range(q):
        sig[j] = init_vars[q - 1 - j]
    with nogil:
        for s in range(n):
            xsq[p + s] = obs_sq[s]
        for s in range(n):
            v = omega
            for i in range(p):
                v = v + alphas[i] * xsq[p + s - 1 - i]
            for j in range(q):
                v = v + betas[j] * sig[q + s - 1 - j]
            sig[q + s] = v
    return sig_arr[q:]


def simulate_path(double omega, const double[::1] alphas, const double[::1] betas,
                  const double[::1] noise, const double[::1] presample_sq,
                  const double[::1] init_vars):
    cdef Py_ssize_t total = noise.shape[0]
    cdef Py_ssize_t p = alphas.shape[0]
    cdef Py_ssize_t q = betas.shape[0]
    xsq_arr = np.empty(p + total)
    sig_arr = np.empty(q + total)
    x_arr = np.empty(total)
    cdef double[::1] xsq = xsq_arr
    cdef double[::1] sig = sig_arr
    cdef double[::1] x = x_arr
    cdef Py_ssize_t s, i, j
    cdef double v
    for i in range(p):
        xsq[i] = presample_sq[p - 1 - i]
    for j in range(q):
        sig[j] = init_vars[q - 1 - j]
    with nogil:
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
    return x_arr, sig_arr[q:]


def loglik_and_score(double omega, const double[::1] alphas, const double[::1] betas,
                     const double[::1] obs_sq, const double[::1] presample_sq,
                     const double[::1] init_vars):
    cdef Py_ssize_t n = obs_sq.shape[0]
    cdef Py_ssize_t p = alphas.shape[0]
    cdef Py_ssize_t q = betas.shape[0]
    cdef Py_ssize_t d = 1 + p + q
    xsq_arr = np.empty(p + n)
    sig_arr = np.empty(q + n)
    dsig_arr = np.zeros((q + n, d))
    grad_arr = np.zeros(d)
    cdef double[::1] xsq = xsq_arr
    cdef double[::1] sig = sig_arr
    cdef double[:, ::1] dsig = dsig_arr
    cdef double[::1] grad = grad_arr
    cdef Py_ssize_t s, i, j, l
    cdef double v, e2, w, ll = 0.0
    for i in range(p):
        xsq[i] = presample_sq[p - 1 - i]
    for j in range(q):
        sig[j] = init_vars[q - 1 - j]
    with nogil:
        for s in range(n):
            xsq[p + s] = obs_sq[s]
        for s in range(n):
            v = omega
            for i in range(p):
                v = v + alphas[i] * xsq[p + s - 1 - i]
            for j in range(q):
                v = v + betas[j] * sig[q + s - 1 - j]
            sig[q + s] = v
            dsig[q + s, 0] = 1.0
            for i in range(p):
                dsig[q + s, 1 + i] = xsq[p + s - 1 - i]
            for j in range(q):
                dsig[q + s, 1 + p + j] = sig[q + s - 1 - j]
            for j in range(q):
                for l in range(d):
                    dsig[q + s, l] = dsig[q + s, l] + betas[j] * dsig[q + s - 1 - j, l]
            e2 = xsq[p + s] / v
            ll += log(v) + e2
            w = (1.0 - e2) / v
            for l in range(d):
                grad[l] = grad[l] + w * dsig[q + s, l]
    for l in range(d):
        grad[l] = grad[l] / n
    return ll / n, grad_arr


def weighted_gradients(double omega, const double[::1] alphas, const double[::1] betas,
                       const double[::1] obs_sq, const double[::1] presample_sq,
                       const double[::1] init_vars):
    cdef Py_ssize_t n = obs_sq.shape[0]
    cdef Py_ssize_t p = alphas.shape[0]
    cdef Py_ssize_t q = betas.shape[0]
    cdef Py_ssize_t d = 1 + p + q
    xsq_arr = np.empty(p + n)
    sig_arr = np.empty(q + n)
    dsig_arr = np.zeros((q + n, d))
    g_arr = np.empty((n, d))
    cdef double[::1] xsq = xsq_arr
    cdef double[::1] sig = sig_arr
    cdef double[:, ::1] dsig = dsig_arr
    cdef double[:, ::1] g = g_arr
    cdef Py_ssize_t s, i, j, l
    cdef double v
    for i in range(p):
        xsq[i] = presample_sq[p - 1 - i]
    for j in range(q):
        sig[j] = init_vars[q - 1 - j]
    with nogil:
        for s in range(n):
            xsq[p + s] = obs_sq[s]
        for s in range(n):
            v = omega
            for i in range(p):
                v = v + alphas[i] * xsq[p + s - 1 - i]
            for j in range(q):
                v = v + betas[j] * sig[q + s - 1 - j]
            sig[q + s] = v
            dsig[q + s, 0] = 1.0
            for i in range(p):
                dsig[q + s, 1 + i] = xsq[p + s - 1 - i]
            for j in range(q):
                dsig[q + s, 1 + p + j] = sig[q + s - 1 - j]
            for j in range(q):
                for l in range(d):
                    dsig[q + s, l] = dsig[q + s, l] + betas[j] * dsig[q + s - 1 - j, l]
            for l in range(d):
                g[s, l] = dsig[q + s, l] / v
    return sig_arr[q:], g_arr


def perturbed_scores(double omega, const double[::1] alphas, const double[::1] betas,
                     const double[::1] eps_sq, const Py_ssize_t[:, ::1] perms,
                     const double[::1] presample_sq, const double[::1] init_vars):
    cdef Py_ssize_t k = perms.shape[0]
    cdef Py_ssize_t n = perms.shape[1]
    cdef Py_ssize_t p = alphas.shape[0]
    cdef Py_ssize_t q = betas.shape[0]
    cdef Py_ssize_t d = 1 + p + q
    xsq_arr = np.empty(p + n)
    sig_arr = np.empty(q + n)
    dsig_arr = np.empty((q + n, d))
    out_arr = np.zeros((k, d))
    cdef double[::1] xsq = xsq_arr
    cdef double[::1] sig = sig_arr
    cdef double[:, ::1] dsig = dsig_arr
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t row, s, i, j, l
    cdef double v, e2, w
    with nogil:
        for row in range(k):
            # shared presample, initial variances, and zero gradient seeds
            for i in range(p):
                xsq[i] = presample_sq[p - 1 - i]
            for j in range(q):
                sig[j] = init_vars[q - 1 - j]
            for j in range(q):
                for l in range(d):
                    dsig[j, l] = 0.0
            for s in range(n):
                v = omega
                for i in range(p):
                    v = v + alphas[i] * xsq[p + s - 1 - i]
                for j in range(q):
                    v = v + betas[j] * sig[q + s - 1 - j]
                sig[q + s] = v
                dsig[q + s, 0] = 1.0
                for i in range(p):
                    dsig[q + s, 1 + i] = xsq[p + s - 1 - i]
                for j in range(q):
                    dsig[q + s, 1 + p + j] = sig[q + s - 1 - j]
                for j in range(q):
                    for l in range(d):
                        dsig[q + s, l] = dsig[q + s, l] + betas[j] * dsig[q + s - 1 - j, l]
                e2 = eps_sq[perms[row, s]]
                w = (1.0 - e2) / v
                for l in range(d):
                    out[row, l] = out[row, l] + w * dsig[q + s, l]
                xsq[p + s] = v * e2
            for l in range(d):
                out[row, l] = out[row, l] / n
    return out_arr
