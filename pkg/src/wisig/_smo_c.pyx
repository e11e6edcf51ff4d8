# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled SMO core. Mirrors ``_smo_py.smo_solve`` step for step."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef double _TAU = 1e-12


def smo_solve(K, y, double c, double tol, long long max_updates, trace=False):
    K = np.ascontiguousarray(K, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    cdef double[:, ::1] Kv = K
    cdef double[::1] yv = y
    cdef Py_ssize_t n = yv.shape[0]

    alpha_arr = np.zeros(n, dtype=np.float64)
    F_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] alpha = alpha_arr
    cdef double[::1] F = F_arr

    objectives = [] if trace else None

    cdef long long n_updates = 0
    cdef double gap = 0.0
    cdef bint converged = False
    cdef Py_ssize_t i, j, t
    cdef double best_up, best_low, v, eta, lo, hi, aj, daj, dai, ci, cj, obj
    cdef bint in_up, in_low

    while n_updates < max_updates:
        best_up = -np.inf
        best_low = np.inf
        i = -1
        j = -1
        for t in range(n):
            v = yv[t] - F[t]
            in_up = (yv[t] > 0 and alpha[t] < c) or (yv[t] < 0 and alpha[t] > 0)
            in_low = (yv[t] > 0 and alpha[t] > 0) or (yv[t] < 0 and alpha[t] < c)
            if in_up and v > best_up:
                best_up = v
                i = t
            if in_low and v < best_low:
                best_low = v
                j = t
        gap = best_up - best_low
        if gap <= tol:
            converged = True
            break

        eta = Kv[i, i] + Kv[j, j] - 2.0 * Kv[i, j]
        if eta <= _TAU:
            eta = _TAU
        if yv[i] != yv[j]:
            lo = max(0.0, alpha[j] - alpha[i])
            hi = min(c, c + alpha[j] - alpha[i])
        else:
            lo = max(0.0, alpha[i] + alpha[j] - c)
            hi = min(c, alpha[i] + alpha[j])
        aj = alpha[j] + yv[j] * ((F[i] - yv[i]) - (F[j] - yv[j])) / eta
        aj = min(hi, max(lo, aj))
        daj = aj - alpha[j]
        if daj < 1e-14 and daj > -1e-14:
            break
        dai = -yv[i] * yv[j] * daj
        alpha[i] += dai
        alpha[j] = aj
        # snap floating residue to the exact box bounds so pinned variables
        # leave the working sets instead of chattering
        if alpha[i] < 1e-12 * c:
            alpha[i] = 0.0
        elif alpha[i] > c - 1e-12 * c:
            alpha[i] = c
        if alpha[j] < 1e-12 * c:
            alpha[j] = 0.0
        elif alpha[j] > c - 1e-12 * c:
            alpha[j] = c
        ci = dai * yv[i]
        cj = daj * yv[j]
        for t in range(n):
            F[t] += ci * Kv[t, i] + cj * Kv[t, j]
        n_updates += 1
        if trace:
            obj = 0.0
            for t in range(n):
                obj += alpha[t] - 0.5 * alpha[t] * yv[t] * F[t]
            objectives.append(obj)

    if not converged:
        best_up = -np.inf
        best_low = np.inf
        for t in range(n):
            v = yv[t] - F[t]
            in_up = (yv[t] > 0 and alpha[t] < c) or (yv[t] < 0 and alpha[t] > 0)
            in_low = (yv[t] > 0 and alpha[t] > 0) or (yv[t] < 0 and alpha[t] < c)
            if in_up and v > best_up:
                best_up = v
            if in_low and v < best_low:
                best_low = v
        gap = best_up - best_low
        converged = gap <= tol

    if trace:
        return alpha_arr, F_arr, n_updates, converged, float(gap), objectives
    return alpha_arr, F_arr, n_updates, converged, float(gap)
