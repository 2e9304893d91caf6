import numpy as np
import pytest

from qcorr import (
    BadTrace,
    DimensionMismatch,
    NotHermitian,
    NotPositive,
    NOutOfRange,
    apply_channel,
    bell_pair,
    dephasing_channel,
    identity_channel,
    is_npt,
    make_channel,
    make_density,
    maximally_mixed,
    noisy_family,
    partial_trace,
    pure_density,
    random_classical_density,
    random_density,
    random_local_channel,
    random_unitary,
    swap_subsystems,
    tensor,
    unitary_channel,
)

import oracles


def test_make_density_uniform():
    rho = make_density(np.eye(4) / 4.0, (2, 2))
    assert rho.dims == (2, 2)
    assert abs(np.trace(rho.entries) - 1.0) < 1e-14


def test_make_density_pure_bell():
    v = np.zeros(4, dtype=np.complex128)
    v[0] = v[3] = 1 / np.sqrt(2)
    rho = make_density(np.outer(v, v.conj()), (2, 2))
    assert np.allclose(rho.entries, bell_pair().entries)


def test_make_density_rejects_negative_eigenvalue():
    m = np.diag([0.6, 0.5, -0.1, 0.0]).astype(np.complex128)
    with pytest.raises(NotPositive):
        make_density(m, (2, 2))


def test_make_density_rejects_nonhermitian():
    m = np.eye(4, dtype=np.complex128) / 4.0
    m[0, 1] = 0.3
    with pytest.raises(NotHermitian):
        make_density(m, (2, 2))


def test_make_density_rejects_bad_trace():
    with pytest.raises(BadTrace):
        make_density(np.eye(4, dtype=np.complex128), (2, 2))


def test_make_density_rejects_wrong_dims():
    with pytest.raises(DimensionMismatch):
        make_density(np.eye(4, dtype=np.complex128) / 4.0, (2, 3))


def test_tensor_identity_halves():
    half = maximally_mixed(2)
    assert np.allclose(tensor(half, half).entries, np.eye(4) / 4.0)


def test_tensor_computational_basis():
    zero = pure_density(np.array([1.0, 0.0]), 2)
    one = pure_density(np.array([0.0, 1.0]), 2)
    rho = tensor(zero, one)
    want = np.zeros((4, 4))
    want[1, 1] = 1.0
    assert np.allclose(rho.entries, want)


def test_tensor_diagonal_products():
    p, q = 0.3, 0.8
    a = make_density(np.diag([p, 1 - p]).astype(np.complex128), 2)
    b = make_density(np.diag([q, 1 - q]).astype(np.complex128), 2)
    got = np.diag(tensor(a, b).entries).real
    assert np.allclose(got, [p * q, p * (1 - q), (1 - p) * q, (1 - p) * (1 - q)])


def test_partial_trace_bell_marginal():
    assert np.allclose(partial_trace(bell_pair(), "A").entries, np.eye(2) / 2)
    assert np.allclose(partial_trace(bell_pair(), "B").entries, np.eye(2) / 2)


def test_partial_trace_product_recovers_factor():
    a = random_density(2, seed=5)
    b = random_density(2, seed=6)
    rho = tensor(a, b)
    assert np.allclose(partial_trace(rho, "A").entries, a.entries, atol=1e-12)
    assert np.allclose(partial_trace(rho, "B").entries, b.entries, atol=1e-12)


def test_partial_trace_classical_mixture():
    m = np.zeros((4, 4), dtype=np.complex128)
    m[0, 0] = m[3, 3] = 0.5
    rho = make_density(m, (2, 2))
    assert np.allclose(partial_trace(rho, "B").entries, np.eye(2) / 2)


def test_swap_subsystems_roundtrip():
    rho = random_density((2, 3), seed=3)
    back = swap_subsystems(swap_subsystems(rho))
    assert np.allclose(back.entries, rho.entries)
    assert swap_subsystems(rho).dims == (3, 2)


def test_identity_channel_fixes_state():
    rho = random_density((2, 2), seed=1)
    assert np.allclose(apply_channel(rho, identity_channel((2, 2), "A")).entries,
                       rho.entries)


def test_full_dephasing_on_bell():
    projs = [np.diag([1.0, 0.0]).astype(np.complex128),
             np.diag([0.0, 1.0]).astype(np.complex128)]
    out = apply_channel(bell_pair(), dephasing_channel(projs, "A", (2, 2)))
    want = np.zeros((4, 4))
    want[0, 0] = want[3, 3] = 0.5
    assert np.allclose(out.entries, want)


def test_local_unitary_action():
    rho = random_density((2, 2), seed=9)
    u = random_unitary(2, seed=4)
    out = apply_channel(rho, unitary_channel(u, "A", (2, 2)))
    big = np.kron(u, np.eye(2))
    assert np.allclose(out.entries, big @ rho.entries @ big.conj().T)


def test_channel_completeness_enforced():
    with pytest.raises(DimensionMismatch):
        make_channel([np.eye(2, dtype=np.complex128) * 0.5], "A", (2, 2))


def test_is_npt_bell_and_products():
    res = is_npt(bell_pair())
    assert res.is_npt and abs(res.min_eigenvalue + 0.5) < 1e-12
    prod = tensor(random_density(2, seed=2), random_density(2, seed=3))
    assert not is_npt(prod).is_npt


def test_is_npt_agrees_with_direct_eigendecomposition():
    for seed in range(6):
        rho = random_density((2, 2), seed=seed)
        res = is_npt(rho)
        want = oracles.pt_min_eig(rho.entries, 2, 2)
        assert abs(res.min_eigenvalue - want) < 1e-12
        assert res.is_npt == (want < -1e-10)


def test_noisy_family_endpoints():
    rho = bell_pair()
    assert np.allclose(noisy_family(rho, 0.0).entries, rho.entries)
    assert np.allclose(noisy_family(rho, 1.0).entries, np.eye(4) / 4)
    werner = noisy_family(rho, 0.5)
    assert np.allclose(np.diag(werner.entries).real,
                       [0.5 * 0.5 + 0.125, 0.125, 0.125, 0.5 * 0.5 + 0.125])
    with pytest.raises(NOutOfRange):
        noisy_family(rho, 1.5)


def test_random_density_determinism_and_rank():
    a = random_density((2, 2), seed=11)
    b = random_density((2, 2), seed=11)
    assert np.array_equal(a.entries, b.entries)
    pure = random_density((2, 2), rank=1, seed=11)
    lam = np.linalg.eigvalsh(pure.entries)
    assert lam[-2] < 1e-9


def test_random_local_channel_complete():
    for seed in range(4):
        ch = random_local_channel((2, 2), n_kraus=3, seed=seed, acts_on="B")
        acc = sum(k.conj().T @ k for k in ch.kraus)
        assert np.abs(acc - np.eye(2)).max() < 1e-10


def test_random_classical_density_structure():
    rho = random_classical_density((2, 2), seed=0)
    marg = partial_trace(rho, "A")
    lam, v = np.linalg.eigh(marg.entries)
    big = np.kron(v, np.eye(2))
    moved = big.conj().T @ rho.entries @ big
    off = moved.reshape(2, 2, 2, 2)[0, :, 1, :]
    assert np.abs(off).max() < 1e-10
