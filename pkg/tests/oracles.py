"""Independent cross-checks used to freeze golden values.

Everything here is plain numpy on raw arrays: no imports from the package
under test, closed-form 2x2 eigenvalues instead of a general solver, and
exhaustive grids instead of descent. Slow by design; the fine-grid runs
happen once in tools/make_goldens.py and their outputs live in
tests/goldens.json.
"""
import numpy as np

SX = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SY = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SZ = np.array([[1, 0], [0, -1]], dtype=np.complex128)


def _h2_vec(lam):
    """Binary-type entropy of 2x2 spectra given as (..., 2) eigenvalue arrays."""
    lam = np.clip(lam.real, 0.0, None)
    mask = lam > 1e-15
    terms = np.where(mask, lam * np.log2(np.where(mask, lam, 1.0)), 0.0)
    return -terms.sum(axis=-1)


def _eig2_closed(mats):
    """Eigenvalues of stacked Hermitian 2x2 matrices, (..., 2, 2) -> (..., 2)."""
    tr = (mats[..., 0, 0] + mats[..., 1, 1]).real
    det = (mats[..., 0, 0] * mats[..., 1, 1]
           - mats[..., 0, 1] * mats[..., 1, 0]).real
    disc = np.sqrt(np.clip(tr * tr / 4.0 - det, 0.0, None))
    return np.stack([tr / 2.0 - disc, tr / 2.0 + disc], axis=-1)


def _direction_grid(n_theta, n_phi):
    theta = np.linspace(0.0, np.pi, n_theta)
    phi = np.linspace(0.0, 2.0 * np.pi, n_phi, endpoint=False)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    n = np.stack([np.sin(tt) * np.cos(pp),
                  np.sin(tt) * np.sin(pp),
                  np.cos(tt)], axis=-1)
    return n.reshape(-1, 3)


def _conditional_generators(rho):
    """M0, (Mx, My, Mz) with Tr_A[(P(n) x I) rho] = (M0 + n.M)/2."""
    r = np.asarray(rho, dtype=np.complex128).reshape(2, 2, 2, 2)
    m0 = np.einsum("abac->bc", r)
    ms = [np.einsum("ac,cbad->bd", s, r) for s in (SX, SY, SZ)]
    return m0, np.stack(ms)


def grid_classical_correlation(rho, n_theta=315, n_phi=629, chunk=200000):
    """Max over Bloch directions of S(B) - sum_e p_e S(B|e) for projective
    two-outcome readouts of A on a two-qubit state. Exhaustive grid, no
    descent; resolution pi/(n_theta-1) radians in theta.
    """
    m0, ms = _conditional_generators(rho)
    s_b = _h2_vec(_eig2_closed(m0[None])[0][None, :])[0]
    dirs = _direction_grid(n_theta, n_phi)
    best = -np.inf
    for lo in range(0, dirs.shape[0], chunk):
        n = dirs[lo:lo + chunk]
        dm = np.tensordot(n, ms, axes=(1, 0))
        c_plus = (m0[None] + dm) / 2.0
        c_minus = (m0[None] - dm) / 2.0
        cond = 0.0
        for c in (c_plus, c_minus):
            p = (c[..., 0, 0] + c[..., 1, 1]).real
            p = np.clip(p, 1e-15, None)
            lam = _eig2_closed(c) / p[..., None]
            cond = cond + p * _h2_vec(lam)
        best = max(best, float((s_b - cond).max()))
    return best


def _entropy_bits(mat):
    lam = np.linalg.eigvalsh(mat)
    lam = lam[lam > 1e-12]
    return float(-(lam * np.log2(lam)).sum())


def grid_discord(rho, n_theta=315, n_phi=629):
    """Mutual information minus the grid-maximized classical correlation."""
    rho = np.asarray(rho, dtype=np.complex128)
    r = rho.reshape(2, 2, 2, 2)
    rho_a = np.einsum("abcb->ac", r)
    rho_b = np.einsum("abac->bc", r)
    mi = _entropy_bits(rho_a) + _entropy_bits(rho_b) - _entropy_bits(rho)
    return mi - grid_classical_correlation(rho, n_theta, n_phi)


def grid_rel_entropy_to_classical(rho, n_theta=315, n_phi=629):
    """Min over Bloch directions of S(rho || rho dephased on A along n)."""
    rho = np.asarray(rho, dtype=np.complex128)
    s_rho = _entropy_bits(rho)
    best = np.inf
    for n in _direction_grid(n_theta, n_phi):
        p = (np.eye(2, dtype=np.complex128)
             + n[0] * SX + n[1] * SY + n[2] * SZ) / 2.0
        q = np.eye(2, dtype=np.complex128) - p
        pk = np.kron(p, np.eye(2))
        qk = np.kron(q, np.eye(2))
        sigma = pk @ rho @ pk + qk @ rho @ qk
        lam, v = np.linalg.eigh(sigma)
        keep = lam > 1e-12
        log_sigma = (v[:, keep] * np.log2(lam[keep])) @ v[:, keep].conj().T
        cross = float(np.trace(rho @ log_sigma).real)
        best = min(best, -s_rho - cross)
    return best


def pt_min_eig(rho, d_a, d_b):
    """Smallest eigenvalue of the partial transpose over the first factor."""
    r = np.asarray(rho, dtype=np.complex128).reshape(d_a, d_b, d_a, d_b)
    pt = np.transpose(r, (2, 1, 0, 3)).reshape(d_a * d_b, d_a * d_b)
    return float(np.linalg.eigvalsh(pt)[0])
