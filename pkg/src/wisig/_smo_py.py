"""Pure-numpy SMO solver for the soft-margin dual problem.

Reference implementation and fallback for the compiled core in
``_smo_c``. Both backends run the identical algorithm: maximal-violating
pair working-set selection (ties broken by lowest index) with the
analytic two-variable update, maintaining F_i = sum_j K_ij y_j alpha_j.
"""

from __future__ import annotations

import numpy as np

_TAU = 1e-12


def smo_solve(K, y, c, tol, max_updates, trace=False):
    """Maximize the soft-margin dual over 0 <= alpha <= c, y.alpha = 0.

    Parameters
    ----------
    K : (n, n) float64 kernel Gram matrix
    y : (n,) float64 labels in {-1, +1}
    c : box constraint
    tol : KKT violation tolerance (stop when max violation gap <= tol)
    max_updates : cap on two-variable updates
    trace : when True, also return the dual objective after every update

    Returns
    -------
    (alpha, F, n_updates, converged, gap[, objectives])
    """
    K = np.ascontiguousarray(K, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    n = y.shape[0]
    alpha = np.zeros(n)
    F = np.zeros(n)
    objectives = [] if trace else None

    n_updates = 0
    gap = np.inf
    converged = False
    while n_updates < max_updates:
        vio = y - F  # -y_i * gradient_i of the dual
        up = ((y > 0) & (alpha < c)) | ((y < 0) & (alpha > 0))
        low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < c))
        vu = np.where(up, vio, -np.inf)
        vl = np.where(low, vio, np.inf)
        i = int(np.argmax(vu))
        j = int(np.argmin(vl))
        gap = vu[i] - vl[j]
        if gap <= tol:
            converged = True
            break

        eta = K[i, i] + K[j, j] - 2.0 * K[i, j]
        if eta <= _TAU:
            eta = _TAU
        # Platt errors E = F - y; E_i - E_j == -(vio_i - vio_j)
        if y[i] != y[j]:
            lo = max(0.0, alpha[j] - alpha[i])
            hi = min(c, c + alpha[j] - alpha[i])
        else:
            lo = max(0.0, alpha[i] + alpha[j] - c)
            hi = min(c, alpha[i] + alpha[j])
        aj = alpha[j] + y[j] * ((F[i] - y[i]) - (F[j] - y[j])) / eta
        aj = min(hi, max(lo, aj))
        daj = aj - alpha[j]
        if abs(daj) < 1e-14:
            break  # numerical floor; convergence is judged by the final gap
        dai = -y[i] * y[j] * daj
        alpha[i] += dai
        alpha[j] = aj
        # snap floating residue to the exact box bounds so pinned variables
        # leave the working sets instead of chattering
        snap = 1e-12 * c
        for t in (i, j):
            if alpha[t] < snap:
                alpha[t] = 0.0
            elif alpha[t] > c - snap:
                alpha[t] = c
        F += (dai * y[i]) * K[:, i] + (daj * y[j]) * K[:, j]
        n_updates += 1
        if trace:
            objectives.append(float(alpha.sum() - 0.5 * np.dot(alpha * y, F)))

    if not converged:
        # re-evaluate the gap after the last accepted update
        vio = y - F
        up = ((y > 0) & (alpha < c)) | ((y < 0) & (alpha > 0))
        low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < c))
        vu = np.where(up, vio, -np.inf)
        vl = np.where(low, vio, np.inf)
        gap = float(np.max(vu) - np.min(vl))
        converged = gap <= tol

    if trace:
        return alpha, F, n_updates, converged, float(gap), objectives
    return alpha, F, n_updates, converged, float(gap)
