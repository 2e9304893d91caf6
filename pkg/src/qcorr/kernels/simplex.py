"""Derivative-free simplex minimizer (pure Python).

Used directly by the numpy backend and by the generic instrument-objective
optimizer. The numba backend carries a transliteration of the same logic;
the constants in common.py keep the two in lockstep.
"""
import numpy as np

from .common import NM_ALPHA, NM_BETA, NM_GAMMA, NM_SIGMA, NM_STEP


def nelder_mead(fn, x0, max_evals=2000, ftol=1e-9):
    """Minimize fn from x0. Returns (x_best, f_best, n_evals)."""
    n = x0.size
    sim = np.empty((n + 1, n), dtype=np.float64)
    fvals = np.empty(n + 1, dtype=np.float64)
    sim[0] = x0
    fvals[0] = fn(sim[0])
    for i in range(n):
        sim[i + 1] = x0
        sim[i + 1, i] += NM_STEP
        fvals[i + 1] = fn(sim[i + 1])
    evals = n + 1

    while evals < max_evals:
        order = np.argsort(fvals, kind="stable")
        sim = sim[order]
        fvals = fvals[order]
        if fvals[n] - fvals[0] <= ftol:
            break

        centroid = sim[:n].sum(axis=0) / n
        xr = centroid + NM_ALPHA * (centroid - sim[n])
        fr = fn(xr)
        evals += 1
        if fr < fvals[0]:
            xe = centroid + NM_GAMMA * (centroid - sim[n])
            fe = fn(xe)
            evals += 1
            if fe < fr:
                sim[n], fvals[n] = xe, fe
            else:
                sim[n], fvals[n] = xr, fr
        elif fr < fvals[n - 1]:
            sim[n], fvals[n] = xr, fr
        else:
            if fr < fvals[n]:
                xc = centroid + NM_BETA * (xr - centroid)
            else:
                xc = centroid - NM_BETA * (centroid - sim[n])
            fc = fn(xc)
            evals += 1
            if fc < min(fr, fvals[n]):
                sim[n], fvals[n] = xc, fc
            else:
                for i in range(1, n + 1):
                    sim[i] = sim[0] + NM_SIGMA * (sim[i] - sim[0])
                    fvals[i] = fn(sim[i])
                evals += n

    best = int(np.argmin(fvals))
    return sim[best].copy(), float(fvals[best]), evals


def restart_points(rng, restarts, n_params):
    """Uniform starting points in (-pi, pi)^n, one row per restart."""
    return rng.uniform(-np.pi, np.pi, size=(restarts, n_params))
