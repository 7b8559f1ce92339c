"""Pure-numpy Newton kernel, used when the compiled extension is absent.

Semantics match ``_newton.pyx`` step for step: damped Gauss-Newton with
Levenberg regularization on the normal equations, Armijo backtracking on
the squared residual.
"""

import numpy as np
from scipy.linalg import cho_solve


def newton_polish_batch(d, w_p, z, t0, tol, max_iter):
    """Polish each start of the idempotent system on the normalization chart.

    Unknown: t with w = w_p + z t.  Residual: F(w) = conv(w, w) - w where
    conv is the bilinear map with coefficients d.  Returns (solutions w,
    sup-norm residuals, convergence flags).
    """
    d = np.asarray(d, dtype=np.complex128)
    w_p = np.asarray(w_p, dtype=np.complex128)
    z = np.asarray(z, dtype=np.complex128)
    t0 = np.asarray(t0, dtype=np.complex128)
    n = d.shape[0]
    m = z.shape[1]
    batch = t0.shape[0]
    eye = np.eye(m)

    out_w = np.empty((batch, n), dtype=np.complex128)
    out_res = np.empty(batch)
    out_ok = np.zeros(batch, dtype=bool)

    def residual(w):
        return np.einsum("ijk,j,k->i", d, w, w) - w

    for b in range(batch):
        t = t0[b].copy()
        w = w_p + z @ t
        f = residual(w)
        phi = float(np.vdot(f, f).real)
        for _ in range(max_iter):
            if np.abs(f).max() <= tol:
                break
            if m == 0:
                break
            jw = (
                np.einsum("ijk,k->ij", d, w)
                + np.einsum("ikj,k->ij", d, w)
                - np.eye(n)
            )
            j = jw @ z
            a = j.conj().T @ j
            rhs = -(j.conj().T @ f)
            lam = 1e-12 * (1.0 + float(a.trace().real) / m)
            delta = None
            for _ in range(4):
                try:
                    chol = np.linalg.cholesky(a + lam * eye)
                    delta = cho_solve((chol, True), rhs)
                    break
                except np.linalg.LinAlgError:
                    lam *= 100.0
            if delta is None:
                break
            step = 1.0
            accepted = False
            while step >= 2.0**-24:
                t_new = t + step * delta
                w_new = w_p + z @ t_new
                f_new = residual(w_new)
                phi_new = float(np.vdot(f_new, f_new).real)
                if phi_new <= phi * (1.0 - 1e-4 * step):
                    t, w, f, phi = t_new, w_new, f_new, phi_new
                    accepted = True
                    break
                step *= 0.5
            if not accepted:
                break
        out_w[b] = w
        out_res[b] = np.abs(f).max()
        out_ok[b] = out_res[b] <= tol
    return out_w, out_res, out_ok
