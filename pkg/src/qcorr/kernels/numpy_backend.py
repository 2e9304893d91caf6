"""Pure-numpy kernel backend.

Function-for-function mirror of numba_backend, selected when QCORR_JIT=0
or when numba is unavailable. Vectorized where it pays off; everything here
operates on raw complex128 arrays, never on the wrapper dataclasses.
"""
import numpy as np

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
    SUPPORT_LEAK_TOL,
)
from .simplex import nelder_mead

NAME = "numpy"
LOG2 = np.log(2.0)


def entropy_from_eigvals(w):
    w = w[w > EIG_CUTOFF]
    if w.size == 0:
        return 0.0
    return float(-(w * np.log(w)).sum() / LOG2)


def vn_entropy(mat):
    return entropy_from_eigvals(np.linalg.eigvalsh(mat))


def reduced_a(rho, d_a, d_b):
    rr = rho.reshape(d_a, d_b, d_a, d_b)
    return np.einsum("ibjb->ij", rr)


def reduced_b(rho, d_a, d_b):
    rr = rho.reshape(d_a, d_b, d_a, d_b)
    return np.einsum("ibic->bc", rr)


def mutual_information(rho, d_a, d_b):
    sa = vn_entropy(reduced_a(rho, d_a, d_b))
    sb = vn_entropy(reduced_b(rho, d_a, d_b))
    return sa + sb - vn_entropy(rho)


def relative_entropy(rho, tau):
    """S(rho || tau) in bits, +inf on support violation."""
    w_r, v_r = np.linalg.eigh(rho)
    w_t, v_t = np.linalg.eigh(tau)
    overlap = np.abs(v_r.conj().T @ v_t) ** 2  # overlap[i, j] = |<r_i|t_j>|^2
    null = w_t <= EIG_CUTOFF
    live = w_r > EIG_CUTOFF
    if null.any():
        leak = overlap[live][:, null].sum(axis=1)
        if (leak > SUPPORT_LEAK_TOL).any():
            return float("inf")
    val = (w_r[live] * np.log(w_r[live])).sum()
    cross = w_r[live][:, None] * overlap[live][:, ~null]
    val -= (cross * np.log(w_t[~null])[None, :]).sum()
    return float(val / LOG2)


def trace_distance(a, b):
    return float(0.5 * np.abs(np.linalg.eigvalsh(a - b)).sum())


def herm_from_params(params, d):
    h = np.zeros((d, d), dtype=np.complex128)
    for i in range(d):
        h[i, i] = params[i]
    idx = d
    for i in range(d):
        for j in range(i + 1, d):
            h[i, j] = params[idx] + 1j * params[idx + 1]
            h[j, i] = params[idx] - 1j * params[idx + 1]
            idx += 2
    return h


def unitary_from_params(params, d):
    """exp(i H) for the Hermitian H packed in d*d real parameters."""
    w, v = np.linalg.eigh(herm_from_params(params, d))
    return (v * np.exp(1j * w)) @ v.conj().T


def isometry_blocks(params, d, k):
    """k Kraus operators (k, d, d) from the first d columns of a (k d)-unitary."""
    u = unitary_from_params(params, k * d)
    v = u[:, :d]
    return np.ascontiguousarray(v.reshape(k, d, d))


def _cond_blocks(rho, d_a, d_b, u):
    """Unnormalized conditional B blocks <u_a| rho |u_a> for each column of u."""
    rr = rho.reshape(d_a, d_b, d_a, d_b)
    return np.einsum("ia,ibjc,ja->abc", u.conj(), rr, u)


def _cond_entropy(blocks):
    w = np.linalg.eigvalsh(blocks)
    val = 0.0
    for a in range(w.shape[0]):
        wa = w[a][w[a] > EIG_CUTOFF]
        p = wa.sum()
        if p > EIG_CUTOFF:
            val += -(wa * np.log(wa)).sum() + p * np.log(p)
    return float(val / LOG2)


def _dephase_rank1(rho, d_a, d_b, u):
    blocks = _cond_blocks(rho, d_a, d_b, u)
    dep = np.einsum("ia,ja,abc->ibjc", u, u.conj(), blocks)
    return np.ascontiguousarray(dep.reshape(d_a * d_b, d_a * d_b))


def _encode_state(rho, d_a, d_b, u):
    blocks = _cond_blocks(rho, d_a, d_b, u)
    n = d_a
    big = np.zeros((n, d_a, d_b, n, d_a, d_b), dtype=np.complex128)
    for a in range(n):
        big[a, :, :, a, :, :] = np.einsum(
            "i,j,bc->ibjc", u[:, a], u[:, a].conj(), blocks[a]
        )
    dim = n * d_a * d_b
    return big.reshape(dim, dim)


def _dephase_rankr(rho, d_a, d_b, u, r):
    dim = d_a * d_b
    eye_b = np.eye(d_b, dtype=np.complex128)
    acc = np.zeros((dim, dim), dtype=np.complex128)
    for g in range(d_a // r):
        cols = u[:, g * r : (g + 1) * r]
        proj = np.kron(cols @ cols.conj().T, eye_b)
        acc += proj @ rho @ proj
    return acc


def _apply_kraus_a(rho, d_b, kraus):
    eye_b = np.eye(d_b, dtype=np.complex128)
    out = None
    for m in kraus:
        big = np.kron(m, eye_b)
        term = big @ rho @ big.conj().T
        out = term if out is None else out + term
    return out


def _apply_kraus_b(rho, d_a, kraus):
    eye_a = np.eye(d_a, dtype=np.complex128)
    out = None
    for m in kraus:
        big = np.kron(eye_a, m)
        term = big @ rho @ big.conj().T
        out = term if out is None else out + term
    return out


def objective(kind, params, mats, ia, fa):
    d_a = int(ia[0])
    d_b = int(ia[1])

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
        r = int(ia[2])
        u = unitary_from_params(params, d_a)
        dep = _dephase_rankr(mats[0], d_a, d_b, u, r)
        return fa[0] - mutual_information(dep, d_a, d_b)

    if kind == K_REL_ENT_DEPHASE:
        u = unitary_from_params(params, d_a)
        dep = _dephase_rank1(mats[0], d_a, d_b, u)
        return relative_entropy(mats[0], dep)

    if kind == K_LOCAL_U_RESIDUAL:
        m = int(ia[2])
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
        n_out = int(ia[2])
        kraus = isometry_blocks(params, d_a, n_out)
        avg = _apply_kraus_a(mats[0], d_b, kraus)
        return fa[0] - mutual_information(avg, d_a, d_b)

    if kind == K_LOCAL_CH_RESIDUAL:
        m = int(ia[2])
        k_a = int(ia[3])
        k_b = int(ia[4])
        n_a = (k_a * d_a) ** 2
        kraus_a = isometry_blocks(params[:n_a], d_a, k_a)
        kraus_b = isometry_blocks(params[n_a:], d_b, k_b)
        worst = 0.0
        for i in range(m):
            out = _apply_kraus_b(_apply_kraus_a(mats[i], d_b, kraus_a), d_a, kraus_b)
            dist = trace_distance(out, mats[m + i])
            if dist > worst:
                worst = dist
        return worst

    raise ValueError("unknown objective kind %d" % kind)


def multistart_minimize(kind, mats, ia, fa, starts, max_evals, ftol):
    """Best (x, f) over independent simplex runs from each row of starts."""

    def fn(x):
        return objective(kind, x, mats, ia, fa)

    best_x = None
    best_f = np.inf
    for r in range(starts.shape[0]):
        x, f, _ = nelder_mead(fn, starts[r].copy(), max_evals, ftol)
        if f < best_f:
            best_f = f
            best_x = x
    return best_x, float(best_f)
