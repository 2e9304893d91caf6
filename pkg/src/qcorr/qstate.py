"""Bipartite density matrices, quantum channels, and randomized generators.

Conventions used throughout the package:

* A state on subsystems (A, B) with dimensions ``(d_a, d_b)`` is stored as a
  dense complex matrix of size ``d_a * d_b``, row-major, with A as the slow
  (left) tensor factor. Single systems carry dims ``(d, 1)``.
* Entropies downstream are base 2 (bits).
* Wrapper objects are immutable; their arrays are marked read-only so they
  can be shared freely across worker processes.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    BadRank,
    BadTrace,
    DimensionMismatch,
    NOutOfRange,
    NotHermitian,
    NotPositive,
)

HERM_TOL = 1e-10
EIG_REPAIR_TOL = 1e-10
TRACE_REPAIR_TOL = 1e-8
KRAUS_COMPLETE_TOL = 1e-10


def _freeze(arr):
    arr = np.ascontiguousarray(arr, dtype=np.complex128)
    arr.flags.writeable = False
    return arr


def _as_dims(dims):
    if isinstance(dims, (int, np.integer)):
        dims = (int(dims), 1)
    d_a, d_b = int(dims[0]), int(dims[1])
    if d_a < 1 or d_b < 1:
        raise DimensionMismatch(f"dims must be positive, got {dims}")
    return d_a, d_b


@dataclass(frozen=True)
class DensityMatrix:
    """Validated bipartite density matrix with dimension annotations."""

    entries: np.ndarray
    dims: tuple[int, int]

    @property
    def d_a(self) -> int:
        return self.dims[0]

    @property
    def d_b(self) -> int:
        return self.dims[1]

    @property
    def dim(self) -> int:
        return self.dims[0] * self.dims[1]


class NptResult(NamedTuple):
    is_npt: bool
    min_eigenvalue: float


def make_density(entries, dims) -> DensityMatrix:
    """Validate and wrap a matrix as a density operator.

    Hermiticity, unit trace and positivity are enforced. Eigenvalues in
    [-1e-10, 0) are clipped to zero and the state renormalized; anything
    more negative raises NotPositive. Trace deviations up to 1e-8 are
    silently repaired, larger ones raise BadTrace.
    """
    dims = _as_dims(dims)
    mat = np.asarray(entries, dtype=np.complex128)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {mat.shape}")
    if mat.shape[0] != dims[0] * dims[1]:
        raise DimensionMismatch(
            f"matrix of size {mat.shape[0]} does not factor as {dims[0]}x{dims[1]}"
        )
    if np.abs(mat - mat.conj().T).max() > HERM_TOL:
        raise NotHermitian("matrix deviates from its adjoint beyond 1e-10")
    tr = mat.trace()
    if abs(tr - 1.0) > TRACE_REPAIR_TOL:
        raise BadTrace(f"trace {tr} not within 1e-8 of one")

    w, v = np.linalg.eigh(mat)
    if w.min() < -EIG_REPAIR_TOL:
        raise NotPositive(f"eigenvalue {w.min():.3e} below -1e-10")
    if w.min() < 0.0 or abs(tr - 1.0) > 1e-15:
        w = np.clip(w, 0.0, None)
        w /= w.sum()
        mat = (v * w) @ v.conj().T
        mat = 0.5 * (mat + mat.conj().T)
    return DensityMatrix(_freeze(mat), dims)


def tensor(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    """Kronecker product; the factors become the (A, B) split of the result."""
    return make_density(np.kron(a.entries, b.entries), (a.dim, b.dim))


def partial_trace(rho: DensityMatrix, keep: str) -> DensityMatrix:
    """Reduced state on the kept subsystem ('A' or 'B')."""
    d_a, d_b = rho.dims
    rr = rho.entries.reshape(d_a, d_b, d_a, d_b)
    if keep == "A":
        red = np.einsum("ibjb->ij", rr)
        return make_density(red, (d_a, 1))
    if keep == "B":
        red = np.einsum("ibic->bc", rr)
        return make_density(red, (d_b, 1))
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def swap_subsystems(rho: DensityMatrix) -> DensityMatrix:
    """Exchange the roles of A and B."""
    d_a, d_b = rho.dims
    rr = rho.entries.reshape(d_a, d_b, d_a, d_b).transpose(1, 0, 3, 2)
    return make_density(rr.reshape(rho.dim, rho.dim), (d_b, d_a))


@dataclass(frozen=True)
class QuantumChannel:
    """CPTP map in Kraus form, tagged with the subsystem it acts on."""

    kraus: tuple[np.ndarray, ...]
    acts_on: str
    in_dims: tuple[int, int]
    out_dims: tuple[int, int]

    @property
    def n_kraus(self) -> int:
        return len(self.kraus)


def make_channel(kraus, acts_on, in_dims, out_dims=None) -> QuantumChannel:
    """Validate Kraus operators and wrap them as a channel.

    For acts_on 'A' or 'B' the operators act on that side alone and the
    other entry of in_dims/out_dims is contextual. Completeness
    sum(K^dag K) = I is enforced to 1e-10.
    """
    if acts_on not in ("A", "B", "AB"):
        raise ValueError(f"acts_on must be 'A', 'B' or 'AB', got {acts_on!r}")
    in_dims = _as_dims(in_dims)
    if out_dims is None:
        out_dims = in_dims
    out_dims = _as_dims(out_dims)
    mats = tuple(_freeze(k) for k in kraus)
    if not mats:
        raise ValueError("a channel needs at least one Kraus operator")
    if acts_on == "A":
        din, dout = in_dims[0], out_dims[0]
    elif acts_on == "B":
        din, dout = in_dims[1], out_dims[1]
    else:
        din = in_dims[0] * in_dims[1]
        dout = out_dims[0] * out_dims[1]
    for k in mats:
        if k.shape != (dout, din):
            raise DimensionMismatch(
                f"Kraus shape {k.shape} does not map dim {din} to dim {dout}"
            )
    acc = np.zeros((din, din), dtype=np.complex128)
    for k in mats:
        acc += k.conj().T @ k
    if np.abs(acc - np.eye(din)).max() > KRAUS_COMPLETE_TOL:
        raise DimensionMismatch("Kraus operators violate completeness beyond 1e-10")
    return QuantumChannel(mats, acts_on, in_dims, out_dims)


def identity_channel(dims, acts_on="A") -> QuantumChannel:
    dims = _as_dims(dims)
    d = dims[0] if acts_on == "A" else dims[1] if acts_on == "B" else dims[0] * dims[1]
    return make_channel([np.eye(d, dtype=np.complex128)], acts_on, dims, dims)


def unitary_channel(u, acts_on, dims) -> QuantumChannel:
    return make_channel([np.asarray(u, dtype=np.complex128)], acts_on, dims, dims)


def dephasing_channel(projectors, acts_on, dims) -> QuantumChannel:
    """Channel rho -> sum_k P_k rho P_k for a complete projector family."""
    return make_channel(list(projectors), acts_on, dims, dims)


def apply_channel(rho: DensityMatrix, ch: QuantumChannel) -> DensityMatrix:
    """Apply a channel; local channels are padded with identity on the idle side."""
    d_a, d_b = rho.dims
    if ch.acts_on == "A":
        if ch.kraus[0].shape[1] != d_a:
            raise DimensionMismatch(
                f"channel expects A dim {ch.kraus[0].shape[1]}, state has {d_a}"
            )
        eye = np.eye(d_b, dtype=np.complex128)
        big = [np.kron(k, eye) for k in ch.kraus]
        out_dims = (ch.kraus[0].shape[0], d_b)
    elif ch.acts_on == "B":
        if ch.kraus[0].shape[1] != d_b:
            raise DimensionMismatch(
                f"channel expects B dim {ch.kraus[0].shape[1]}, state has {d_b}"
            )
        eye = np.eye(d_a, dtype=np.complex128)
        big = [np.kron(eye, k) for k in ch.kraus]
        out_dims = (d_a, ch.kraus[0].shape[0])
    else:
        if ch.kraus[0].shape[1] != rho.dim or ch.in_dims != rho.dims:
            raise DimensionMismatch(
                f"channel expects dims {ch.in_dims}, state has {rho.dims}"
            )
        big = ch.kraus
        out_dims = ch.out_dims
    acc = np.zeros((big[0].shape[0], big[0].shape[0]), dtype=np.complex128)
    for k in big:
        acc += k @ rho.entries @ k.conj().T
    return make_density(acc, out_dims)


def is_npt(rho: DensityMatrix) -> NptResult:
    """Partial transpose test on B. NPT witnesses entanglement; PPT is inconclusive."""
    d_a, d_b = rho.dims
    pt = rho.entries.reshape(d_a, d_b, d_a, d_b).transpose(0, 3, 2, 1)
    w = np.linalg.eigvalsh(pt.reshape(rho.dim, rho.dim))
    lo = float(w.min())
    return NptResult(lo < -1e-10, lo)


def noisy_family(rho0: DensityMatrix, noise: float) -> DensityMatrix:
    """(1 - N) rho0 + N I/d for N in [0, 1]."""
    if not 0.0 <= noise <= 1.0:
        raise NOutOfRange(f"noise {noise} outside [0, 1]")
    eye = np.eye(rho0.dim, dtype=np.complex128) / rho0.dim
    return make_density((1.0 - noise) * rho0.entries + noise * eye, rho0.dims)


def maximally_mixed(dims) -> DensityMatrix:
    dims = _as_dims(dims)
    d = dims[0] * dims[1]
    return DensityMatrix(_freeze(np.eye(d) / d), dims)


def pure_density(vec, dims) -> DensityMatrix:
    v = np.asarray(vec, dtype=np.complex128).ravel()
    v = v / np.linalg.norm(v)
    return make_density(np.outer(v, v.conj()), dims)


def bell_pair() -> DensityMatrix:
    """The two-qubit state (|00> + |11>)/sqrt(2) as a density matrix."""
    v = np.zeros(4, dtype=np.complex128)
    v[0] = v[3] = 1.0 / np.sqrt(2.0)
    return pure_density(v, (2, 2))


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_unitary(dim, seed=None):
    """Haar-distributed unitary (QR of a Ginibre matrix, phases fixed)."""
    rng = _rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_density(dims, rank=None, seed=None) -> DensityMatrix:
    """Wishart-sampled state of the given rank (default full)."""
    dims = _as_dims(dims)
    d = dims[0] * dims[1]
    if rank is None:
        rank = d
    if not isinstance(rank, (int, np.integer)) or not 1 <= rank <= d:
        raise BadRank(f"rank {rank} not in 1..{d}")
    rng = _rng(seed)
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    mat = g @ g.conj().T
    mat /= mat.trace().real
    return make_density(mat, dims)


def random_local_channel(dims, n_kraus, seed=None, acts_on="A") -> QuantumChannel:
    """Haar-ish random channel on one side (Stinespring isometry split)."""
    dims = _as_dims(dims)
    if acts_on not in ("A", "B"):
        raise ValueError("random_local_channel acts on 'A' or 'B'")
    d = dims[0] if acts_on == "A" else dims[1]
    if not isinstance(n_kraus, (int, np.integer)) or n_kraus < 1:
        raise BadRank(f"n_kraus {n_kraus} must be a positive integer")
    rng = _rng(seed)
    g = rng.standard_normal((n_kraus * d, d)) + 1j * rng.standard_normal((n_kraus * d, d))
    q, r = np.linalg.qr(g)
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    kraus = [q[a * d : (a + 1) * d, :] for a in range(n_kraus)]
    return make_channel(kraus, acts_on, dims, dims)


def random_classical_density(dims, seed=None) -> DensityMatrix:
    """Random state of the form sum_a p_a |u_a><u_a| x sigma_a.

    The basis on A is Haar random, the weights Dirichlet, and each
    conditional B state an independent full-rank Wishart sample.
    """
    dims = _as_dims(dims)
    d_a, d_b = dims
    rng = _rng(seed)
    basis = random_unitary(d_a, rng)
    probs = rng.dirichlet(np.ones(d_a))
    acc = np.zeros((d_a * d_b, d_a * d_b), dtype=np.complex128)
    for a in range(d_a):
        proj = np.outer(basis[:, a], basis[:, a].conj())
        sigma = random_density((d_b, 1), seed=rng)
        acc += probs[a] * np.kron(proj, sigma.entries)
    return make_density(acc, dims)
