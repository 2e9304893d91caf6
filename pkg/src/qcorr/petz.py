"""Transpose-channel recovery maps and the entropy-change consistency checks."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .correlations import discord_oz, mutual_information, relative_entropy
from .errors import DimensionMismatch, InfiniteRelativeEntropy, SingularReference
from .optimize import OptimizerConfig
from .qstate import (
    DensityMatrix,
    QuantumChannel,
    apply_channel,
    make_channel,
    swap_subsystems,
    tensor,
)

SUPPORT_CUTOFF = 1e-12
SUPPORT_COMPLETE_TOL = 1e-9


def petz_recovery(ch: QuantumChannel, tau: DensityMatrix) -> QuantumChannel:
    """Recovery map tau^{1/2} K^dag L(tau)^{-1/2} (.) for each Kraus K of ch.

    tau lives on the channel's input space (the acted side for a local
    channel). The inverse square root is taken on the support of L(tau)
    after a 1e-12 eigenvalue cutoff; if that support is deficient the map
    is completed with the complement projector, an arbitrary but harmless
    extension since recovered states never leave the support. The defining
    exactness R(L(tau)) = tau holds to numerical precision.
    """
    din = ch.kraus[0].shape[1]
    dout = ch.kraus[0].shape[0]
    if tau.dim != din:
        raise DimensionMismatch(
            f"reference of dimension {tau.dim} does not match channel input {din}"
        )
    t = tau.entries
    lt = np.zeros((dout, dout), dtype=np.complex128)
    for k in ch.kraus:
        lt += k @ t @ k.conj().T
    w, v = np.linalg.eigh(lt)
    keep = w > SUPPORT_CUTOFF
    if not keep.any():
        raise SingularReference("channel output of the reference has no support")
    vk = v[:, keep]
    inv_sqrt = (vk * (1.0 / np.sqrt(w[keep]))) @ vk.conj().T
    wt, vt = np.linalg.eigh(t)
    t_sqrt = (vt * np.sqrt(np.clip(wt, 0.0, None))) @ vt.conj().T
    kraus_r = [t_sqrt @ k.conj().T @ inv_sqrt for k in ch.kraus]

    supp = vk @ vk.conj().T
    acc = np.zeros((dout, dout), dtype=np.complex128)
    for r in kraus_r:
        acc += r.conj().T @ r
    if np.abs(acc - supp).max() > SUPPORT_COMPLETE_TOL:
        raise SingularReference("recovery Kraus operators lost completeness on the support")
    if not keep.all():
        kraus_r.append(np.eye(dout, dtype=np.complex128) - supp)
    return make_channel(kraus_r, ch.acts_on, ch.out_dims, ch.in_dims)


@dataclass(frozen=True)
class PetzReport:
    rel_entropy_before: float
    rel_entropy_after: float
    equality: bool
    recovery_found: bool
    recovery_errors: tuple[float, float]
    reference_roundtrip: float


def verify_lemma1(rho: DensityMatrix, tau_a: DensityMatrix, tau_b: DensityMatrix,
                  ch: QuantumChannel, tol=1e-7) -> PetzReport:
    """Test whether a local channel preserves S(rho || tau_a x tau_b) exactly
    when the transpose channel of the acted marginal recovers both states.

    Raises InfiniteRelativeEntropy if the premise S(rho || tau) < inf fails.
    The report carries the raw distances so callers can apply their own
    thresholds; equality and recovery_found use tol directly.
    """
    if ch.acts_on not in ("A", "B"):
        raise ValueError("the equality check applies to one-sided channels")
    tau = tensor(tau_a, tau_b)
    if tau.dims != rho.dims:
        raise DimensionMismatch(
            f"reference dims {tau.dims} do not match state dims {rho.dims}"
        )
    s_before = relative_entropy(rho, tau)
    if np.isinf(s_before):
        raise InfiniteRelativeEntropy("state leaves the support of the reference")
    rho_out = apply_channel(rho, ch)
    tau_out = apply_channel(tau, ch)
    s_after = relative_entropy(rho_out, tau_out)

    ref = tau_a if ch.acts_on == "A" else tau_b
    rec = petz_recovery(ch, ref)
    rho_back = apply_channel(rho_out, rec)
    tau_back = apply_channel(tau_out, rec)
    err_rho = float(kernels.trace_distance(rho_back.entries, rho.entries))
    err_tau = float(kernels.trace_distance(tau_back.entries, tau.entries))

    # roundtrip on the reference alone: rebind the same Kraus families to
    # single-system dims so the joint-state validation stays out of the way
    d_in = ch.kraus[0].shape[1]
    d_out = ch.kraus[0].shape[0]
    ch_solo = make_channel(list(ch.kraus), "A", (d_in, 1), (d_out, 1))
    rec_solo = make_channel(list(rec.kraus), "A", (d_out, 1), (d_in, 1))
    ref_out = apply_channel(ref, ch_solo)
    ref_back = apply_channel(ref_out, rec_solo)
    roundtrip = float(kernels.trace_distance(ref_back.entries, ref.entries))

    equality = abs(s_before - s_after) < tol
    recovery_found = err_rho < tol and err_tau < tol
    return PetzReport(
        rel_entropy_before=float(s_before),
        rel_entropy_after=float(s_after),
        equality=equality,
        recovery_found=recovery_found,
        recovery_errors=(err_rho, err_tau),
        reference_roundtrip=roundtrip,
    )


@dataclass(frozen=True)
class Theorem1Record:
    d_mi: float
    d_discord: float
    consistent: bool
    bound_ok: bool
    near_threshold: bool


def theorem1_check(rho: DensityMatrix, ch: QuantumChannel,
                   opt: OptimizerConfig | None = None,
                   discord_tol=1e-3, mi_tol=1e-9, bound_slack=1e-4,
                   discord_on_b=False) -> Theorem1Record:
    """Change of mutual information vs change of discord under one channel.

    consistent: a discord change above discord_tol is accompanied by a
    strict mutual information decrease (> mi_tol). bound_ok: the
    information loss is at least the discord loss up to bound_slack.
    near_threshold marks |d_discord| within a factor two of discord_tol,
    a reporting aid for borderline records. Discord is measured on A
    unless discord_on_b mirrors everything to B.
    """
    opt = opt or OptimizerConfig()
    rho_out = apply_channel(rho, ch)
    d_mi = mutual_information(rho) - mutual_information(rho_out)
    if discord_on_b:
        d_pre = discord_oz(swap_subsystems(rho), opt)
        d_post = discord_oz(swap_subsystems(rho_out), opt)
    else:
        d_pre = discord_oz(rho, opt)
        d_post = discord_oz(rho_out, opt)
    d_discord = d_pre - d_post
    changed = abs(d_discord) > discord_tol
    consistent = (not changed) or (d_mi > mi_tol)
    bound_ok = d_mi >= d_discord - bound_slack
    near = 0.5 * discord_tol < abs(d_discord) <= 2.0 * discord_tol
    return Theorem1Record(
        d_mi=float(d_mi),
        d_discord=float(d_discord),
        consistent=bool(consistent),
        bound_ok=bool(bound_ok),
        near_threshold=bool(near),
    )
