"""Instruments, measurement classes, and searches over them.

An instrument is a CPTP map whose Kraus operators are grouped by outcome;
the POVM element of an outcome is the sum of K^dag K over its group.
Measurement classes describe the families the classicality notions range
over: rank-1 projective, rank-r projective, and measurements with at least
N linearly independent outcomes ('all' is the N=2 case).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DimensionMismatch, UnrealizableClass
from .optimize import OptimizerConfig, run_multistart_python
from .qstate import DensityMatrix, _freeze, make_density, random_unitary

COMPLETE_TOL = 1e-10
NONTRIVIAL_TOL = 1e-9
PROJ_TOL = 1e-9


@dataclass(frozen=True)
class MeasurementClass:
    """A family of instruments, identified by kind and its parameter."""

    kind: str  # "rank1" | "rankr" | "minout" | "all"
    rank: int = 1
    min_outcomes: int = 2

    @classmethod
    def rank1(cls) -> "MeasurementClass":
        return cls("rank1")

    @classmethod
    def rank_r(cls, r: int) -> "MeasurementClass":
        if r < 1:
            raise ValueError("rank must be >= 1")
        return cls("rankr", rank=r)

    @classmethod
    def min_outcomes_of(cls, n: int) -> "MeasurementClass":
        if n < 2:
            raise ValueError("min_outcomes must be >= 2")
        return cls("minout", min_outcomes=n)

    @classmethod
    def all_measurements(cls) -> "MeasurementClass":
        return cls("all")

    @classmethod
    def parse(cls, text: str) -> "MeasurementClass":
        """Parse 'rank1', 'rankr:R', 'minout:N', or 'all'."""
        text = text.strip().lower()
        if text == "rank1":
            return cls.rank1()
        if text == "all":
            return cls.all_measurements()
        if text.startswith("rankr:"):
            return cls.rank_r(int(text.split(":", 1)[1]))
        if text.startswith("minout:"):
            return cls.min_outcomes_of(int(text.split(":", 1)[1]))
        raise ValueError(f"unknown measurement class {text!r}")

    @property
    def label(self) -> str:
        if self.kind == "rankr":
            return f"rankr:{self.rank}"
        if self.kind == "minout":
            return f"minout:{self.min_outcomes}"
        return self.kind

    @property
    def effective_min_outcomes(self) -> int:
        return self.min_outcomes if self.kind == "minout" else 2


@dataclass(frozen=True)
class Instrument:
    """Kraus operators grouped by outcome, acting on one side."""

    groups: tuple[tuple[np.ndarray, ...], ...]
    acts_on: str = "A"

    @property
    def n_outcomes(self) -> int:
        return len(self.groups)

    @property
    def dim(self) -> int:
        return self.groups[0][0].shape[1]

    @property
    def povm(self) -> tuple[np.ndarray, ...]:
        out = []
        for grp in self.groups:
            e = np.zeros((self.dim, self.dim), dtype=np.complex128)
            for k in grp:
                e += k.conj().T @ k
            out.append(e)
        return tuple(out)

    @property
    def is_nontrivial(self) -> bool:
        """True if some POVM element is not proportional to the identity."""
        d = self.dim
        eye = np.eye(d)
        for e in self.povm:
            dev = e - (e.trace().real / d) * eye
            if np.linalg.norm(dev) > NONTRIVIAL_TOL:
                return True
        return False


def make_instrument(groups, acts_on="A") -> Instrument:
    """Validate outcome-grouped Kraus operators (global completeness 1e-10)."""
    if acts_on not in ("A", "B"):
        raise ValueError("instrument acts on 'A' or 'B'")
    frozen = tuple(tuple(_freeze(k) for k in grp) for grp in groups)
    if not frozen or any(not grp for grp in frozen):
        raise ValueError("instrument needs at least one Kraus operator per outcome")
    d = frozen[0][0].shape[1]
    acc = np.zeros((d, d), dtype=np.complex128)
    for grp in frozen:
        for k in grp:
            if k.ndim != 2 or k.shape != (d, d):
                raise DimensionMismatch("instrument Kraus operators must be square on one dimension")
            acc += k.conj().T @ k
    if np.abs(acc - np.eye(d)).max() > COMPLETE_TOL:
        raise DimensionMismatch("instrument violates completeness beyond 1e-10")
    return Instrument(frozen, acts_on)


def projective_instrument(basis_or_projectors, acts_on="A") -> Instrument:
    """Instrument from a unitary's columns (rank-1) or a projector family."""
    obj = np.asarray(basis_or_projectors, dtype=np.complex128)
    if obj.ndim == 2:
        projs = [np.outer(obj[:, a], obj[:, a].conj()) for a in range(obj.shape[1])]
    else:
        projs = [obj[i] for i in range(obj.shape[0])]
    return make_instrument([[p] for p in projs], acts_on)


def _psd_sqrt(mat):
    w, v = np.linalg.eigh(mat)
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def instrument_from_povm(elements, acts_on="A") -> Instrument:
    """One Kraus per outcome, the PSD square root of each POVM element."""
    return make_instrument([[_psd_sqrt(e)] for e in elements], acts_on)


def weak_binary_instrument(epsilon: float, acts_on="A") -> Instrument:
    """Two-outcome qubit POVM (I +- eps X)/2, sharpening as eps -> 1.

    Members of the minimal nontrivial class for any eps > 0; the induced
    mutual information drop vanishes as eps -> 0.
    """
    if not 0.0 < epsilon <= 1.0:
        raise ValueError("epsilon must be in (0, 1]")
    x = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
    eye = np.eye(2, dtype=np.complex128)
    e_plus = 0.5 * (eye + epsilon * x)
    e_minus = 0.5 * (eye - epsilon * x)
    return instrument_from_povm([e_plus, e_minus], acts_on)


def _pad_kraus(k, rho: DensityMatrix, acts_on: str):
    d_a, d_b = rho.dims
    if acts_on == "A":
        if k.shape[1] != d_a:
            raise DimensionMismatch(
                f"instrument expects A dim {k.shape[1]}, state has {d_a}"
            )
        return np.kron(k, np.eye(d_b, dtype=np.complex128))
    if k.shape[1] != d_b:
        raise DimensionMismatch(
            f"instrument expects B dim {k.shape[1]}, state has {d_b}"
        )
    return np.kron(np.eye(d_a, dtype=np.complex128), k)


def _outcome_terms(rho: DensityMatrix, inst: Instrument):
    terms = []
    for grp in inst.groups:
        acc = None
        for k in grp:
            big = _pad_kraus(k, rho, inst.acts_on)
            t = big @ rho.entries @ big.conj().T
            acc = t if acc is None else acc + t
        terms.append(acc)
    return terms


def apply_instrument(rho: DensityMatrix, inst: Instrument, mode="average") -> DensityMatrix:
    """Measured state, outcomes either averaged over or encoded in a flag.

    In encode mode a classical register of size n_outcomes is prepended to
    the measured side, so the result lives on (n*d_a, d_b) for an A-side
    instrument.
    """
    terms = _outcome_terms(rho, inst)
    d_a, d_b = rho.dims
    n = inst.n_outcomes
    if mode == "average":
        return make_density(sum(terms), rho.dims)
    if mode != "encode":
        raise ValueError("mode must be 'average' or 'encode'")
    dim = rho.dim
    if inst.acts_on == "A":
        big = np.zeros((n * dim, n * dim), dtype=np.complex128)
        for a, t in enumerate(terms):
            big[a * dim : (a + 1) * dim, a * dim : (a + 1) * dim] = t
        return make_density(big, (n * d_a, d_b))
    big = np.zeros((d_a, n, d_b, d_a, n, d_b), dtype=np.complex128)
    for a, t in enumerate(terms):
        big[:, a, :, :, a, :] = t.reshape(d_a, d_b, d_a, d_b)
    return make_density(big.reshape(n * dim, n * dim), (d_a, n * d_b))


def _projector_ranks(povm):
    """Ranks if every element is a projector (eigenvalues 0/1), else None."""
    ranks = []
    for e in povm:
        w = np.linalg.eigvalsh(e)
        if np.abs(w - np.round(w)).max() > PROJ_TOL:
            return None
        ranks.append(int(round(w.sum().real)))
    return ranks


def _mutually_orthogonal(povm):
    for i in range(len(povm)):
        for j in range(i + 1, len(povm)):
            if np.abs(povm[i] @ povm[j]).max() > PROJ_TOL:
                return False
    return True


def count_independent(povm) -> int:
    """Number of linearly independent POVM elements."""
    stack = np.stack([e.ravel() for e in povm])
    s = np.linalg.svd(stack, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int((s > 1e-9 * s[0]).sum())


def membership(inst: Instrument, cls: MeasurementClass) -> bool:
    """Whether an instrument belongs to a measurement class."""
    povm = inst.povm
    if cls.kind in ("rank1", "rankr"):
        want = 1 if cls.kind == "rank1" else cls.rank
        ranks = _projector_ranks(povm)
        if ranks is None or any(r != want for r in ranks):
            return False
        return _mutually_orthogonal(povm)
    need = cls.effective_min_outcomes
    return inst.is_nontrivial and count_independent(povm) >= need


def sample_instrument(cls: MeasurementClass, dim: int, seed=None) -> Instrument:
    """Random member of a class at the given dimension (seed-deterministic)."""
    rng = np.random.default_rng(seed) if not isinstance(seed, np.random.Generator) else seed
    if cls.kind == "rank1":
        return projective_instrument(random_unitary(dim, rng))
    if cls.kind == "rankr":
        r = cls.rank
        if dim % r != 0:
            raise UnrealizableClass(f"rank {r} does not divide dimension {dim}")
        u = random_unitary(dim, rng)
        projs = []
        for g in range(dim // r):
            cols = u[:, g * r : (g + 1) * r]
            projs.append(cols @ cols.conj().T)
        return make_instrument([[p] for p in projs])
    n = cls.effective_min_outcomes
    if n > dim * dim:
        raise UnrealizableClass(
            f"cannot realize {n} independent POVM elements at dimension {dim}"
        )
    big = random_unitary(n * dim, rng)
    blocks = [big[a * dim : (a + 1) * dim, :dim] for a in range(n)]
    inst = make_instrument([[b] for b in blocks])
    if not membership(inst, cls):
        # Haar samples are members almost surely; a degenerate draw is resampled.
        return sample_instrument(cls, dim, rng)
    return inst


def _class_builder(cls: MeasurementClass, dim: int):
    if cls.kind == "rank1":
        n_params = dim * dim

        def build(params):
            return projective_instrument(kernels.unitary_from_params(params, dim))

        return n_params, build
    if cls.kind == "rankr":
        r = cls.rank
        if dim % r != 0:
            raise UnrealizableClass(f"rank {r} does not divide dimension {dim}")
        n_params = dim * dim

        def build(params):
            u = kernels.unitary_from_params(params, dim)
            projs = []
            for g in range(dim // r):
                cols = u[:, g * r : (g + 1) * r]
                projs.append(cols @ cols.conj().T)
            return make_instrument([[p] for p in projs])

        return n_params, build
    n = cls.effective_min_outcomes
    if n > dim * dim:
        raise UnrealizableClass(
            f"cannot realize {n} independent POVM elements at dimension {dim}"
        )
    n_params = (n * dim) ** 2

    def build(params):
        blocks = kernels.isometry_blocks(np.asarray(params), dim, n)
        return make_instrument([[blocks[a]] for a in range(n)])

    return n_params, build


def optimize_over_class(objective, cls: MeasurementClass, dim: int,
                        opt: OptimizerConfig | None = None, maximize=False):
    """Extremize a Python objective(Instrument) -> float over a class.

    Generic and therefore slow; the built-in measures use dedicated kernel
    objectives instead. Returns (best instrument, best objective value).
    """
    opt = opt or OptimizerConfig()
    n_params, build = _class_builder(cls, dim)
    sign = -1.0 if maximize else 1.0

    def fn(params):
        return sign * objective(build(params))

    x, f = run_multistart_python(fn, n_params, opt)
    return build(x), sign * f
