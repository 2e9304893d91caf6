"""JIT kernel backend.

Same contract as numpy_backend, compiled with numba. The objective
dispatcher and the simplex driver run entirely in nopython mode, which is
what makes multistart discord optimization affordable at suite scale
(millions of small complex eigendecompositions).
"""
import numpy as np
from numba import njit

from .common import (
    EIG_CUTOFF,
    K_COND_ENT,
    K_LOCAL_CH_RESIDUAL,
    K_LOCAL_U_RESIDUAL,
    K_MI_DROP_DEPHASE,
    K_MI_DROP_DEPHASE_R,
    K_MI_DROP_KRAUS,
    K_NEG_ENCODE_MI,
    K_REL_ENT_DEPHASE,
    NM_ALPHA,
    NM_BETA,
    NM_GAMMA,
    NM_SIGMA,
    NM_STEP,
    SUPPORT_LEAK_TOL,
)

NAME = "numba"
LOG2 = np.log(2.0)


@njit(cache=True)
def entropy_from_eigvals(w):
    val = 0.0
    for i in range(w.size):
        if w[i] > EIG_CUTOFF:
            val -= w[i] * np.log(w[i])
    return val / LOG2


@njit(cache=True)
def vn_entropy(mat):
    return entropy_from_eigvals(np.linalg.eigvalsh(mat))


@njit(cache=True)
def reduced_a(rho, d_a, d_b):
    out = np.zeros((d_a, d_a), dtype=np.complex128)
    for i in range(d_a):
        for j in range(d_a):
            acc = 0.0 + 0.0j
            for b in range(d_b):
                acc += rho[i * d_b + b, j * d_b + b]
            out[i, j] = acc
    return out


@njit(cache=True)
def reduced_b(rho, d_a, d_b):
    out = np.zeros((d_b, d_b), dtype=np.complex128)
    for b in range(d_b):
        for c in range(d_b):
            acc = 0.0 + 0.0j
            for i in range(d_a):
                acc += rho[i * d_b + b, i * d_b + c]
            out[b, c] = acc
    return out


@njit(cache=True)
def mutual_information(rho, d_a, d_b):
    sa = vn_entropy(reduced_a(rho, d_a, d_b))
    sb = vn_entropy(reduced_b(rho, d_a, d_b))
    return sa + sb - vn_entropy(rho)


@njit(cache=True)
def relative_entropy(rho, tau):
    w_r, v_r = np.linalg.eigh(rho)
    w_t, v_t = np.linalg.eigh(tau)
    m = v_r.conj().T @ v_t
    n = w_r.size
    for i in range(n):
        if w_r[i] > EIG_CUTOFF:
            leak = 0.0
            for j in range(n):
                if w_t[j] <= EIG_CUTOFF:
                    leak += m[i, j].real ** 2 + m[i, j].imag ** 2
            if leak > SUPPORT_LEAK_TOL:
                return np.inf
    val = 0.0
    for i in range(n):
        if w_r[i] > EIG_CUTOFF:
            val += w_r[i] * np.log(w_r[i])
            for j in range(n):
                if w_t[j] > EIG_CUTOFF:
                    ov = m[i, j].real ** 2 + m[i, j].imag ** 2
                    val -= w_r[i] * ov * np.log(w_t[j])
    return val / LOG2


@njit(cache=True)
def trace_distance(a, b):
    w = np.linalg.eigvalsh(a - b)
    total = 0.0
    for i in range(w.size):
        total += abs(w[i])
    return 0.5 * total


@njit(cache=True)
def herm_from_params(params, d):
    h = np.zeros((d, d), dtype=np.complex128)
    for i in range(d):
        h[i, i] = params[i]
    idx = d
    for i in range(d):
        for j in range(i + 1, d):
            h[i, j] = complex(params[idx], params[idx + 1])
            h[j, i] = complex(params[idx], -params[idx + 1])
            idx += 2
    return h


@njit(cache=True)
def unitary_from_params(params, d):
    w, v = np.linalg.eigh(herm_from_params(params, d))
    return (v * np.exp(1j * w)) @ v.conj().T


@njit(cache=True)
def isometry_blocks(params, d, k):
    u = unitary_from_params(params, k * d)
    blocks = np.zeros((k, d, d), dtype=np.complex128)
    for a in range(k):
        for i in range(d):
            for j in range(d):
                blocks[a, i, j] = u[a * d + i, j]
    return blocks


@njit(cache=True)
def _cond_blocks(rho, d_a, d_b, u):
    blocks = np.zeros((d_a, d_b, d_b), dtype=np.complex128)
    for a in range(d_a):
        for i in range(d_a):
            for j in range(d_a):
                cij = np.conj(u[i, a]) * u[j, a]
                if cij.real == 0.0 and cij.imag == 0.0:
                    continue
                for b in range(d_b):
                    for c in range(d_b):
                        blocks[a, b, c] += cij * rho[i * d_b + b, j * d_b + c]
    return blocks


@njit(cache=True)
def _cond_entropy(blocks):
    val = 0.0
    for a in range(blocks.shape[0]):
        w = np.linalg.eigvalsh(blocks[a])
        p = 0.0
        for i in range(w.size):
            if w[i] > EIG_CUTOFF:
                val -= w[i] * np.log(w[i])
                p += w[i]
        if p > EIG_CUTOFF:
            val += p * np.log(p)
    return val / LOG2


@njit(cache=True)
def _dephase_rank1(rho, d_a, d_b, u):
    blocks = _cond_blocks(rho, d_a, d_b, u)
    dim = d_a * d_b
    dep = np.zeros((dim, dim), dtype=np.complex128)
    for i in range(d_a):
        for j in range(d_a):
            for a in range(d_a):
                uij = u[i, a] * np.conj(u[j, a])
                for b in range(d_b):
                    for c in range(d_b):
                        dep[i * d_b + b, j * d_b + c] += uij * blocks[a, b, c]
    return dep


@njit(cache=True)
def _encode_state(rho, d_a, d_b, u):
    blocks = _cond_blocks(rho, d_a, d_b, u)
    dim = d_a * d_a * d_b
    big = np.zeros((dim, dim), dtype=np.complex128)
    for a in range(d_a):
        for i in range(d_a):
            for j in range(d_a):
                uij = u[i, a] * np.conj(u[j, a])
                row0 = (a * d_a + i) * d_b
                col0 = (a * d_a + j) * d_b
                for b in range(d_b):
                    for c in range(d_b):
                        big[row0 + b, col0 + c] = uij * blocks[a, b, c]
    return big


@njit(cache=True)
def _dephase_rankr(rho, d_a, d_b, u, r):
    dim = d_a * d_b
    acc = np.zeros((dim, dim), dtype=np.complex128)
    eye_b = np.eye(d_b, dtype=np.complex128)
    for g in range(d_a // r):
        proj = np.zeros((d_a, d_a), dtype=np.complex128)
        for t in range(g * r, (g + 1) * r):
            for i in range(d_a):
                for j in range(d_a):
                    proj[i, j] += u[i, t] * np.conj(u[j, t])
        big = np.kron(proj, eye_b)
        acc += big @ rho @ big
    return acc


@njit(cache=True)
def _apply_kraus_a(rho, d_b, kraus):
    dim = rho.shape[0]
    eye_b = np.eye(d_b, dtype=np.complex128)
    out = np.zeros((dim, dim), dtype=np.complex128)
    for a in range(kraus.shape[0]):
        big = np.kron(kraus[a], eye_b)
        out += big @ rho @ big.conj().T
    return out


@njit(cache=True)
def _apply_kraus_b(rho, d_a, kraus):
    dim = rho.shape[0]
    eye_a = np.eye(d_a, dtype=np.complex128)
    out = np.zeros((dim, dim), dtype=np.complex128)
    for a in range(kraus.shape[0]):
        big = np.kron(eye_a, kraus[a])
        out += big @ rho @ big.conj().T
    return out


@njit(cache=True)
def objective(kind, params, mats, ia, fa):
    d_a = ia[0]
    d_b = ia[1]

    if kind == K_COND_ENT:
        u = unitary_from_params(params, d_a)
        return _cond_entropy(_cond_blocks(mats[0], d_a, d_b, u))

    if kind == K_NEG_ENCODE_MI:
        u = unitary_from_params(params, d_a)
        big = _encode_state(mats[0], d_a, d_b, u)
        return -mutual_information(big, d_a * d_a, d_b)

    if kind == K_MI_DROP_DEPHASE:
        u = unitary_from_params(params, d_a)
        dep = _dephase_rank1(mats[0], d_a, d_b, u)
        return fa[0] - mutual_information(dep, d_a, d_b)

    if kind == K_MI_DROP_DEPHASE_R:
        r = ia[2]
        u = unitary_from_params(params, d_a)
        dep = _dephase_rankr(mats[0], d_a, d_b, u, r)
        return fa[0] - mutual_information(dep, d_a, d_b)

    if kind == K_REL_ENT_DEPHASE:
        u = unitary_from_params(params, d_a)
        dep = _dephase_rank1(mats[0], d_a, d_b, u)
        return relative_entropy(mats[0], dep)

    if kind == K_LOCAL_U_RESIDUAL:
        m = ia[2]
        n_a = d_a * d_a
        u_a = unitary_from_params(params[:n_a], d_a)
        u_b = unitary_from_params(params[n_a:], d_b)
        w = np.kron(u_a, u_b)
        worst = 0.0
        for i in range(m):
            dist = trace_distance(w @ mats[i] @ w.conj().T, mats[m + i])
            if dist > worst:
                worst = dist
        return worst

    if kind == K_MI_DROP_KRAUS:
        n_out = ia[2]
        kraus = isometry_blocks(params, d_a, n_out)
        avg = _apply_kraus_a(mats[0], d_b, kraus)
        return fa[0] - mutual_information(avg, d_a, d_b)

    if kind == K_LOCAL_CH_RESIDUAL:
        m = ia[2]
        k_a = ia[3]
        k_b = ia[4]
        n_a = (k_a * d_a) * (k_a * d_a)
        kraus_a = isometry_blocks(params[:n_a], d_a, k_a)
        kraus_b = isometry_blocks(params[n_a:], d_b, k_b)
        worst = 0.0
        for i in range(m):
            out = _apply_kraus_b(_apply_kraus_a(mats[i], d_b, kraus_a), d_a, kraus_b)
            dist = trace_distance(out, mats[m + i])
            if dist > worst:
                worst = dist
        return worst

    return np.nan


@njit(cache=True)
def _nelder_mead(kind, mats, ia, fa, x0, max_evals, ftol):
    n = x0.size
    sim = np.empty((n + 1, n), dtype=np.float64)
    fvals = np.empty(n + 1, dtype=np.float64)
    for j in range(n):
        sim[0, j] = x0[j]
    fvals[0] = objective(kind, sim[0], mats, ia, fa)
    for i in range(n):
        for j in range(n):
            sim[i + 1, j] = x0[j]
        sim[i + 1, i] += NM_STEP
        fvals[i + 1] = objective(kind, sim[i + 1], mats, ia, fa)
    evals = n + 1

    while evals < max_evals:
        order = np.argsort(fvals, kind="mergesort")
        sim = sim[order]
        fvals = fvals[order]
        if fvals[n] - fvals[0] <= ftol:
            break

        centroid = np.zeros(n)
        for i in range(n):
            for j in range(n):
                centroid[j] += sim[i, j]
        centroid /= n

        xr = centroid + NM_ALPHA * (centroid - sim[n])
        fr = objective(kind, xr, mats, ia, fa)
        evals += 1
        if fr < fvals[0]:
            xe = centroid + NM_GAMMA * (centroid - sim[n])
            fe = objective(kind, xe, mats, ia, fa)
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
            fc = objective(kind, xc, mats, ia, fa)
            evals += 1
            if fc < min(fr, fvals[n]):
                sim[n], fvals[n] = xc, fc
            else:
                for i in range(1, n + 1):
                    sim[i] = sim[0] + NM_SIGMA * (sim[i] - sim[0])
                    fvals[i] = objective(kind, sim[i], mats, ia, fa)
                evals += n

    best = 0
    for i in range(1, n + 1):
        if fvals[i] < fvals[best]:
            best = i
    return sim[best].copy(), fvals[best]


@njit(cache=True)
def multistart_minimize(kind, mats, ia, fa, starts, max_evals, ftol):
    best_x = np.zeros(starts.shape[1])
    best_f = np.inf
    for r in range(starts.shape[0]):
        x, f = _nelder_mead(kind, mats, ia, fa, starts[r].copy(), max_evals, ftol)
        if f < best_f:
            best_f = f
            best_x = x
    return best_x, best_f
