# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Newton kernel for the idempotent-state system.

Same algorithm as ``_fallback.newton_polish_batch``: damped Gauss-Newton
with Levenberg regularization, Cholesky-solved normal equations (LAPACK
zpotrf/zpotrs) and Armijo backtracking.  The per-start work is a handful
of O(n^3) contractions on tiny arrays, which is exactly where the
interpreter overhead of the numpy version dominates.
"""

import numpy as np

cimport numpy as cnp
from scipy.linalg.cython_lapack cimport zpotrf, zpotrs

cnp.import_array()

ctypedef double complex zdouble


cdef inline double _sup_abs(zdouble* f, int n) noexcept:
    cdef double best = 0.0, cur
    cdef int i
    for i in range(n):
        cur = abs(f[i])
        if cur > best:
            best = cur
    return best


cdef inline void _eval_w(zdouble* w_p, zdouble* z, zdouble* t,
                         zdouble* w, int n, int m) noexcept:
    cdef int i, j
    cdef zdouble acc
    for i in range(n):
        acc = w_p[i]
        for j in range(m):
            acc = acc + z[i * m + j] * t[j]
        w[i] = acc


cdef inline void _eval_f(zdouble* d, zdouble* w, zdouble* f, int n) noexcept:
    # F_i = sum_{j,k} d[i,j,k] w_j w_k - w_i
    cdef int i, j, k
    cdef zdouble acc, wj
    for i in range(n):
        acc = -w[i]
        for j in range(n):
            wj = w[j]
            if wj != 0:
                for k in range(n):
                    acc = acc + d[(i * n + j) * n + k] * wj * w[k]
        f[i] = acc


cdef inline double _phi(zdouble* f, int n) noexcept:
    cdef double acc = 0.0
    cdef int i
    for i in range(n):
        acc += f[i].real * f[i].real + f[i].imag * f[i].imag
    return acc


def newton_polish_batch(object d_in, object w_p_in, object z_in, object t0_in,
                        double tol, int max_iter):
    """See ``qgidem._kernels._fallback.newton_polish_batch``."""
    cdef cnp.ndarray[zdouble, ndim=3, mode="c"] d = np.ascontiguousarray(
        d_in, dtype=np.complex128)
    cdef cnp.ndarray[zdouble, ndim=1, mode="c"] w_p = np.ascontiguousarray(
        w_p_in, dtype=np.complex128)
    cdef cnp.ndarray[zdouble, ndim=2, mode="c"] z = np.ascontiguousarray(
        z_in, dtype=np.complex128)
    cdef cnp.ndarray[zdouble, ndim=2, mode="c"] t0 = np.ascontiguousarray(
        t0_in, dtype=np.complex128)

    cdef int n = d.shape[0]
    cdef int m = z.shape[1]
    cdef int batch = t0.shape[0]

    if m == 0:
        w0 = np.tile(np.asarray(w_p), (batch, 1))
        res0 = np.abs(
            np.einsum("ijk,bj,bk->bi", np.asarray(d), w0, w0) - w0
        ).max(axis=1)
        return w0, res0, res0 <= tol

    cdef cnp.ndarray[zdouble, ndim=2, mode="c"] out_w = np.empty(
        (batch, n), dtype=np.complex128)
    cdef cnp.ndarray[double, ndim=1, mode="c"] out_res = np.empty(batch)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1, mode="c"] out_ok = np.zeros(
        batch, dtype=np.uint8)

    cdef cnp.ndarray[zdouble, ndim=1, mode="c"] w_ = np.empty(n, dtype=np.complex128)
    cdef cnp.ndarray[zdouble, ndim=1, mode="c"] f_ = np.empty(n, dtype=np.complex128)
    cdef cnp.ndarray[zdouble, ndim=1, mode="c"] wn_ = np.empty(n, dtype=np.complex128)
    cdef cnp.ndarray[zdouble, ndim=1, mode="c"] fn_ = np.empty(n, dtype=np.complex128)
    cdef cnp.ndarray[zdouble, ndim=1, mode="c"] t_ = np.empty(m, dtype=np.complex128)
    cdef cnp.ndarray[zdouble, ndim=1, mode="c"] tn_ = np.empty(m, dtype=np.complex128)
    cdef cnp.ndarray[zdouble, ndim=1, mode="c"] jw_ = np.empty(n * n, dtype=np.complex128)
    cdef cnp.ndarray[zdouble, ndim=1, mode="c"] j_ = np.empty(n * m, dtype=np.complex128)
    cdef cnp.ndarray[zdouble, ndim=1, mode="c"] a_ = np.empty(m * m, dtype=np.complex128)
    cdef cnp.ndarray[zdouble, ndim=1, mode="c"] af_ = np.empty(m * m, dtype=np.complex128)
    cdef cnp.ndarray[zdouble, ndim=1, mode="c"] rhs_ = np.empty(m, dtype=np.complex128)

    cdef zdouble* dp = &d[0, 0, 0]
    cdef zdouble* wpp = &w_p[0]
    cdef zdouble* zp = &z[0, 0]
    cdef zdouble* w = &w_[0]
    cdef zdouble* f = &f_[0]
    cdef zdouble* wn = &wn_[0]
    cdef zdouble* fn = &fn_[0]
    cdef zdouble* t = &t_[0]
    cdef zdouble* tn = &tn_[0]
    cdef zdouble* jw = &jw_[0]
    cdef zdouble* jm = &j_[0]
    cdef zdouble* am = &a_[0]
    cdef zdouble* af = &af_[0]
    cdef zdouble* rhs = &rhs_[0]

    cdef int b, it, i, jj, k, reg_try, info, one = 1
    cdef double phi, phi_new, step, lam, trace
    cdef double step_floor = 2.0 ** -24
    cdef zdouble acc
    cdef char uplo = c'L'
    cdef bint accepted

    for b in range(batch):
        for i in range(m):
            t[i] = t0[b, i]
        _eval_w(wpp, zp, t, w, n, m)
        _eval_f(dp, w, f, n)
        phi = _phi(f, n)

        for it in range(max_iter):
            if _sup_abs(f, n) <= tol:
                break
            # J_w[i, l] = sum_k (d[i,l,k] + d[i,k,l]) w_k - delta_il
            for i in range(n):
                for jj in range(n):
                    acc = 0
                    for k in range(n):
                        acc = acc + (dp[(i * n + jj) * n + k]
                                     + dp[(i * n + k) * n + jj]) * w[k]
                    if i == jj:
                        acc = acc - 1
                    jw[i * n + jj] = acc
            # J = J_w z  (n x m, row-major)
            for i in range(n):
                for jj in range(m):
                    acc = 0
                    for k in range(n):
                        acc = acc + jw[i * n + k] * zp[k * m + jj]
                    jm[i * m + jj] = acc
            # normal equations A = J^H J (filled column-major for LAPACK),
            # rhs = -J^H F
            trace = 0.0
            for i in range(m):
                for jj in range(m):
                    acc = 0
                    for k in range(n):
                        acc = acc + jm[k * m + i].conjugate() * jm[k * m + jj]
                    am[i + m * jj] = acc
                    if i == jj:
                        trace += acc.real
                acc = 0
                for k in range(n):
                    acc = acc - jm[k * m + i].conjugate() * f[k]
                rhs[i] = acc
            lam = 1e-12 * (1.0 + trace / m)

            info = -1
            for reg_try in range(4):
                for i in range(m * m):
                    af[i] = am[i]
                for i in range(m):
                    af[i + m * i] = af[i + m * i] + lam
                zpotrf(&uplo, &m, af, &m, &info)
                if info == 0:
                    break
                lam *= 100.0
            if info != 0:
                break
            for i in range(m):
                tn[i] = rhs[i]
            zpotrs(&uplo, &m, &one, af, &m, tn, &m, &info)
            if info != 0:
                break
            # tn now holds the step; backtrack on ||F||^2, reusing rhs for
            # the trial point
            step = 1.0
            accepted = False
            while step >= step_floor:
                for i in range(m):
                    rhs[i] = t[i] + step * tn[i]
                _eval_w(wpp, zp, rhs, wn, n, m)
                _eval_f(dp, wn, fn, n)
                phi_new = _phi(fn, n)
                if phi_new <= phi * (1.0 - 1e-4 * step):
                    for i in range(m):
                        t[i] = rhs[i]
                    for i in range(n):
                        w[i] = wn[i]
                        f[i] = fn[i]
                    phi = phi_new
                    accepted = True
                    break
                step *= 0.5
            if not accepted:
                break

        for i in range(n):
            out_w[b, i] = w[i]
        out_res[b] = _sup_abs(f, n)
        out_ok[b] = 1 if out_res[b] <= tol else 0

    return np.asarray(out_w), np.asarray(out_res), np.asarray(out_ok, dtype=bool)
