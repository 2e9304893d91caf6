"""Classicality relative to a measurement class, and K-discord quantities.

The workhorse is a fixed-point analysis: the projective dephasings on A
that leave rho unchanged are exactly those whose projectors commute with
every B-block of rho. The commutant is solved as a linear system and a
random element of it yields the finest admissible block decomposition,
which is then matched against the requested measurement class.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .correlations import discord_oz, mutual_information, relative_entropy
from .errors import UnrealizableClass, VanishingClassWarning, VerificationFailed
from .measurements import (
    Instrument,
    MeasurementClass,
    apply_instrument,
    make_instrument,
    optimize_over_class,
)
from .optimize import OptimizerConfig, run_multistart, stack_mats
from .qstate import DensityMatrix, maximally_mixed

GAP_TOL = 1e-8
VERIFY_TOL = 1e-9
NULL_SPACE_RTOL = 1e-10


def mi_drop(rho: DensityMatrix, inst: Instrument, encode=False) -> float:
    """Mutual information lost by measuring; nonnegative up to 1e-9 clips."""
    mode = "encode" if encode else "average"
    after = mutual_information(apply_instrument(rho, inst, mode))
    drop = mutual_information(rho) - after
    return 0.0 if -1e-9 <= drop < 0.0 else drop


def _herm_basis(d):
    basis = []
    for i in range(d):
        m = np.zeros((d, d), dtype=np.complex128)
        m[i, i] = 1.0
        basis.append(m)
    inv = 1.0 / np.sqrt(2.0)
    for i in range(d):
        for j in range(i + 1, d):
            m = np.zeros((d, d), dtype=np.complex128)
            m[i, j] = inv
            m[j, i] = inv
            basis.append(m)
            m = np.zeros((d, d), dtype=np.complex128)
            m[i, j] = 1j * inv
            m[j, i] = -1j * inv
            basis.append(m)
    return basis


def commutant_blocks(rho: DensityMatrix, seed=0, gap_tol=GAP_TOL,
                     verify_tol=VERIFY_TOL, retries=5):
    """Finest projector family on A whose dephasing fixes rho.

    Solves [H, T] = 0 for all B-blocks T of rho over Hermitian H, draws a
    random commutant element, and splits its spectrum at gaps above
    gap_tol. The resulting dephasing is verified to reproduce rho within
    verify_tol; a failed draw is retried, then VerificationFailed.
    """
    d_a, d_b = rho.dims
    rr = rho.entries.reshape(d_a, d_b, d_a, d_b)
    blocks_b = [np.ascontiguousarray(rr[:, m, :, n]) for m in range(d_b) for n in range(d_b)]
    basis = _herm_basis(d_a)
    cols = []
    for h in basis:
        rows = []
        for t in blocks_b:
            comm = h @ t - t @ h
            rows.append(comm.ravel().real)
            rows.append(comm.ravel().imag)
        cols.append(np.concatenate(rows))
    system = np.stack(cols, axis=1)
    s = np.linalg.svd(system, compute_uv=False)
    _, _, vt = np.linalg.svd(system, full_matrices=False)
    if s[0] == 0.0:
        null = np.eye(len(basis))
    else:
        rank = int((s > NULL_SPACE_RTOL * s[0]).sum())
        null = vt[rank:]
    if null.shape[0] == 0:
        raise VerificationFailed("commutant solver found no fixed dephasing at all")

    rng = np.random.default_rng(seed)
    eye_b = np.eye(d_b, dtype=np.complex128)
    for _ in range(retries):
        coeff = rng.standard_normal(null.shape[0]) @ null
        elem = np.zeros((d_a, d_a), dtype=np.complex128)
        for c, h in zip(coeff, basis):
            elem += c * h
        w, v = np.linalg.eigh(elem)
        splits = [0]
        for i in range(1, d_a):
            if w[i] - w[i - 1] > gap_tol:
                splits.append(i)
        splits.append(d_a)
        projs = []
        for k in range(len(splits) - 1):
            cols_v = v[:, splits[k] : splits[k + 1]]
            projs.append(cols_v @ cols_v.conj().T)
        dep = np.zeros_like(rho.entries)
        for p in projs:
            big = np.kron(p, eye_b)
            dep += big @ rho.entries @ big
        if np.abs(dep - rho.entries).max() <= verify_tol:
            return projs
    raise VerificationFailed(
        f"block dephasing failed to reproduce the state after {retries} draws"
    )


@dataclass(frozen=True)
class KClassicalVerdict:
    is_classical: bool
    witness: Instrument | None
    mi_before: float
    mi_after: float
    method: str


def _grouped_witness(projs, n_groups) -> Instrument:
    """Merge the finest blocks into exactly n_groups projectors."""
    head = projs[: n_groups - 1]
    tail = projs[n_groups - 1 :]
    merged = head + [sum(tail)]
    return make_instrument([[p] for p in merged])


def _rank_grouping(ranks, r):
    """Partition block ranks into groups summing to r each, or None."""
    if sum(ranks) % r != 0:
        return None
    order = sorted(range(len(ranks)), key=lambda i: -ranks[i])
    groups = []

    def place(pos, open_groups):
        if pos == len(order):
            return all(s == r for s, _ in open_groups)
        idx = order[pos]
        for g, (total, members) in enumerate(open_groups):
            if total + ranks[idx] <= r:
                open_groups[g] = (total + ranks[idx], members + [idx])
                if place(pos + 1, open_groups):
                    return True
                open_groups[g] = (total, members)
        if ranks[idx] <= r:
            open_groups.append((ranks[idx], [idx]))
            if place(pos + 1, open_groups):
                return True
            open_groups.pop()
        return False

    if not place(0, groups):
        return None
    return [members for _, members in groups]


def _min_drop_in_class(rho, cls, opt):
    """Kernel-optimized minimal MI drop over a class (no warning)."""
    d_a, d_b = rho.dims
    i0 = mutual_information(rho)
    mats = stack_mats([rho.entries])
    if cls.kind == "rank1":
        _, best = run_multistart(
            kernels.K_MI_DROP_DEPHASE, mats, [d_a, d_b], [i0], d_a * d_a, opt
        )
    elif cls.kind == "rankr":
        if d_a % cls.rank != 0:
            raise UnrealizableClass(f"rank {cls.rank} does not divide dimension {d_a}")
        _, best = run_multistart(
            kernels.K_MI_DROP_DEPHASE_R, mats, [d_a, d_b, cls.rank], [i0], d_a * d_a, opt
        )
    else:
        n = cls.effective_min_outcomes
        if n > d_a * d_a:
            raise UnrealizableClass(
                f"cannot realize {n} independent POVM elements at dimension {d_a}"
            )
        _, best = run_multistart(
            kernels.K_MI_DROP_KRAUS, mats, [d_a, d_b, n], [i0], (n * d_a) ** 2, opt
        )
    return 0.0 if -1e-9 <= best < 0.0 else best


def _optimizer_verdict(rho, cls, tol, opt) -> KClassicalVerdict:
    mi_before = mutual_information(rho)
    try:
        drop = _min_drop_in_class(rho, cls, opt)
    except UnrealizableClass:
        return KClassicalVerdict(False, None, mi_before, mi_before, "optimizer_search")
    if drop < tol:
        # Rebuild the witness from a fresh search to return an instrument.
        inst, _ = optimize_over_class(
            lambda ins: mi_drop(rho, ins), cls, rho.d_a,
            OptimizerConfig(restarts=max(4, opt.restarts // 4), seed=opt.seed),
        )
        return KClassicalVerdict(True, inst, mi_before, mi_before - drop, "optimizer_search")
    return KClassicalVerdict(False, None, mi_before, mi_before - drop, "optimizer_search")


def is_k_classical(rho: DensityMatrix, cls: MeasurementClass, tol=1e-7,
                   opt: OptimizerConfig | None = None, seed=0) -> KClassicalVerdict:
    """Decide whether some measurement in the class preserves mutual information.

    The verdict rests on the fixed-point block decomposition: the state is
    classical for MinOutcomes(N)/'all' iff at least N blocks exist, for
    rank-1 iff all blocks are rank one (cross-checked against discord), and
    for rank-r iff the blocks group into rank-r projectors. If the block
    construction fails its self-check, the verdict falls back to direct
    minimization of the in-class information drop. mi_after reports the
    best in-class retention found; for a class with no member at this
    dimension it equals mi_before and the verdict is negative.
    """
    opt = opt or OptimizerConfig()
    mi_before = mutual_information(rho)
    try:
        projs = commutant_blocks(rho, seed=seed)
    except VerificationFailed:
        return _optimizer_verdict(rho, cls, tol, opt)

    witness = None
    if cls.kind in ("minout", "all"):
        need = cls.effective_min_outcomes
        if len(projs) >= need:
            witness = _grouped_witness(projs, need)
    elif cls.kind == "rank1":
        ranks = [int(round(p.trace().real)) for p in projs]
        if all(r == 1 for r in ranks) and discord_oz(rho, opt) < tol:
            witness = make_instrument([[p] for p in projs])
    else:
        if rho.d_a % cls.rank == 0:
            ranks = [int(round(p.trace().real)) for p in projs]
            grouping = _rank_grouping(ranks, cls.rank)
            if grouping is not None:
                merged = [sum(projs[i] for i in g) for g in grouping]
                witness = make_instrument([[p] for p in merged])
        else:
            return KClassicalVerdict(False, None, mi_before, mi_before, "fixed_point_blocks")

    if witness is not None:
        mi_after = mutual_information(apply_instrument(rho, witness, "average"))
        if mi_before - mi_after < tol:
            return KClassicalVerdict(True, witness, mi_before, mi_after, "fixed_point_blocks")
        return _optimizer_verdict(rho, cls, tol, opt)

    mi_after = mi_before - _min_drop_in_class(rho, cls, opt)
    return KClassicalVerdict(False, None, mi_before, mi_after, "fixed_point_blocks")


def k_discord(rho: DensityMatrix, cls: MeasurementClass,
              opt: OptimizerConfig | None = None) -> float:
    """Minimal mutual information drop over the class.

    For the outcome-count classes this is an infimum approached by ever
    weaker measurements; a VanishingClassWarning marks the reported number
    as the optimizer's best rather than an attained minimum.
    """
    opt = opt or OptimizerConfig()
    if cls.kind in ("minout", "all"):
        warnings.warn(
            "k_discord over an outcome-count class is a vanishing infimum; "
            "the reported value is the best found, not an attained minimum",
            VanishingClassWarning,
            stacklevel=2,
        )
    return _min_drop_in_class(rho, cls, opt)


def thermal_k_discord(rho: DensityMatrix, inst: Instrument) -> float:
    """Drop in distinguishability from the maximally mixed reference,
    S(rho || I/d) - S(M(rho) || M(I/d)) for the instrument's average map."""
    ref = maximally_mixed(rho.dims)
    before = relative_entropy(rho, ref)
    after = relative_entropy(
        apply_instrument(rho, inst, "average"), apply_instrument(ref, inst, "average")
    )
    val = before - after
    return 0.0 if -1e-9 <= val < 0.0 else val


def rel_entropy_to_classical(rho: DensityMatrix,
                             opt: OptimizerConfig | None = None) -> float:
    """min over bases of S(rho || rho dephased in that basis on A).

    A computable stand-in for the relative-entropy distance to the
    classical set; the minimizing dephasing is the projection onto it.
    """
    opt = opt or OptimizerConfig()
    d_a, d_b = rho.dims
    mats = stack_mats([rho.entries])
    _, best = run_multistart(
        kernels.K_REL_ENT_DEPHASE, mats, [d_a, d_b], [0.0], d_a * d_a, opt
    )
    return 0.0 if -1e-9 <= best < 0.0 else best
