"""Entropy, mutual information, classical correlation, and discord.

Two independent routes to discord are provided. discord_oz subtracts the
measurement-maximized classical correlation from the mutual information;
discord_mi minimizes the information lost when the measured side is
replaced by an outcome-encoded classical register. They agree at the
optimum for rank-1 measurements and are cross-checked in the test suite.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DimensionMismatch
from .measurements import Instrument, instrument_from_povm, projective_instrument
from .optimize import OptimizerConfig, run_multistart, stack_mats
from .qstate import DensityMatrix, make_density

P_CUTOFF = 1e-12


def entropy(rho: DensityMatrix) -> float:
    """Von Neumann entropy in bits."""
    return _clip_tiny_neg(float(kernels.vn_entropy(rho.entries)))


def relative_entropy(rho: DensityMatrix, tau: DensityMatrix) -> float:
    """S(rho || tau) in bits; +inf iff rho leaves the support of tau."""
    if rho.dim != tau.dim:
        raise DimensionMismatch(
            f"states of dimension {rho.dim} and {tau.dim} are not comparable"
        )
    return float(kernels.relative_entropy(rho.entries, tau.entries))


def mutual_information(rho: DensityMatrix) -> float:
    """S(A) + S(B) - S(AB), nonnegative up to eigensolver noise."""
    return float(kernels.mutual_information(rho.entries, rho.d_a, rho.d_b))


@dataclass(frozen=True)
class ConditionalEnsemble:
    """Outcome probabilities with the post-measurement states of the idle side."""

    outcomes: tuple[tuple[float, DensityMatrix], ...]

    @property
    def probabilities(self):
        return tuple(p for p, _ in self.outcomes)


def measure_and_condition(rho: DensityMatrix, inst: Instrument) -> ConditionalEnsemble:
    """Ensemble {p_a, rho_{other|a}} induced by an instrument's POVM.

    Outcomes with probability below 1e-12 are dropped.
    """
    d_a, d_b = rho.dims
    rr = rho.entries.reshape(d_a, d_b, d_a, d_b)
    out = []
    for e in inst.povm:
        if inst.acts_on == "A":
            if e.shape[0] != d_a:
                raise DimensionMismatch("POVM element does not match the A dimension")
            cond = np.einsum("ik,kbic->bc", e, rr)
            dims = (d_b, 1)
        else:
            if e.shape[0] != d_b:
                raise DimensionMismatch("POVM element does not match the B dimension")
            cond = np.einsum("bk,ikjb->ij", e, rr)
            dims = (d_a, 1)
        p = float(cond.trace().real)
        if p < P_CUTOFF:
            continue
        out.append((p, make_density(cond / p, dims)))
    return ConditionalEnsemble(tuple(out))


def _clip_tiny_neg(x: float) -> float:
    return 0.0 if -1e-9 <= x < 0.0 else x


def _extend_with_ancilla(rho: DensityMatrix):
    """Prepend a |0><0| ancilla of size d_a to the A side (dilation for POVMs)."""
    d_a = rho.d_a
    anc = np.zeros((d_a, d_a), dtype=np.complex128)
    anc[0, 0] = 1.0
    ext = np.kron(anc, rho.entries)
    return make_density(ext, (d_a * d_a, rho.d_b)), d_a


def _povm_witness_from_basis(u, d_anc, d_a) -> Instrument:
    """Compress an extended-space basis back to a POVM on the original A."""
    elements = []
    for a in range(u.shape[1]):
        w = u[:, a].reshape(d_anc, d_a)[0]
        elements.append(np.outer(w, w.conj()))
    return instrument_from_povm(elements)


def classical_correlation(rho: DensityMatrix, opt: OptimizerConfig | None = None):
    """Maximal one-way classical correlation J with its witness instrument.

    Maximizes S(B) - sum_a p_a S(rho_{B|a}) over rank-1 projective
    measurements on A by multistart simplex search; with opt.povm the
    search runs over rank-1 POVMs through an ancilla dilation (off by
    default). Returns (J, witness).
    """
    opt = opt or OptimizerConfig()
    if opt.povm:
        work, d_anc = _extend_with_ancilla(rho)
    else:
        work, d_anc = rho, 1
    d_eff = work.d_a
    mats = stack_mats([work.entries])
    x, best = run_multistart(
        kernels.K_COND_ENT, mats, [d_eff, work.d_b], [0.0], d_eff * d_eff, opt
    )
    s_b = float(kernels.vn_entropy(kernels.reduced_b(rho.entries, rho.d_a, rho.d_b)))
    j = _clip_tiny_neg(s_b - best)
    u = kernels.unitary_from_params(x, d_eff)
    if opt.povm:
        witness = _povm_witness_from_basis(u, d_anc, rho.d_a)
    else:
        witness = projective_instrument(u)
    return j, witness


def discord_oz(rho: DensityMatrix, opt: OptimizerConfig | None = None) -> float:
    """Discord on A as mutual information minus classical correlation."""
    j, _ = classical_correlation(rho, opt)
    return _clip_tiny_neg(mutual_information(rho) - j)


def discord_mi(rho: DensityMatrix, opt: OptimizerConfig | None = None) -> float:
    """Discord on A as the minimal mutual information drop under
    outcome-encoded rank-1 measurement of A."""
    opt = opt or OptimizerConfig()
    if opt.povm:
        work, _ = _extend_with_ancilla(rho)
    else:
        work = rho
    d_eff = work.d_a
    i0 = mutual_information(work)
    mats = stack_mats([work.entries])
    _, best = run_multistart(
        kernels.K_NEG_ENCODE_MI, mats, [d_eff, work.d_b], [0.0], d_eff * d_eff, opt
    )
    # best is -max I(encoded); the drop at the optimum is i0 + best.
    return _clip_tiny_neg(i0 + best)
