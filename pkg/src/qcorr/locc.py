"""Two-party protocols with classical messages, and restricted-gate analysis.

A protocol is an alternating sequence of local steps starting with A. An
instrument step records its outcome in a classical register prepended to
the measuring party's side (slowest factor); declaring a message_dim
copies that record, through an explicit classical-copy Kraus channel, into
a fresh register on the partner's side. Registers persist for later steps
(a receiving party may apply a channel to its full side, register
included) and are all traced out at the end, so the simulated map is CPTP
on the original (A, B) pair.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

from . import kernels
from .correlations import discord_oz, mutual_information, relative_entropy
from .errors import DimensionMismatch, MessageOverflow, NotProductInput
from .kclassical import is_k_classical
from .measurements import Instrument, MeasurementClass
from .optimize import OptimizerConfig, run_multistart, stack_mats
from .qstate import (
    DensityMatrix,
    QuantumChannel,
    apply_channel,
    make_channel,
    make_density,
    noisy_family,
    partial_trace,
)

FOUND_TOL = 1e-6
PRODUCT_TOL = 1e-9


@dataclass(frozen=True)
class ProtocolStep:
    """One local action; message_dim > 0 sends the outcome to the partner.

    message_map optionally relabels outcome a to symbol message_map[a];
    by default outcomes are sent verbatim.
    """

    party: str
    operation: QuantumChannel | Instrument
    message_dim: int = 0
    message_map: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.party not in ("A", "B"):
            raise ValueError("step party must be 'A' or 'B'")
        if self.operation.acts_on != self.party:
            raise ValueError(
                f"step on party {self.party} carries an operation tagged "
                f"{self.operation.acts_on}"
            )
        if self.message_dim and not isinstance(self.operation, Instrument):
            raise ValueError("only instrument outcomes can be sent as messages")


@dataclass(frozen=True)
class LoccProtocol:
    steps: tuple[ProtocolStep, ...]

    def __post_init__(self):
        want = "A"
        for step in self.steps:
            if step.party != want:
                raise ValueError("protocol steps must alternate A, B, A, ...")
            want = "B" if want == "A" else "A"


@dataclass(frozen=True)
class StateSet:
    """Generators of the (convex) input set a restricted gate is defined on."""

    generators: tuple[DensityMatrix, ...]

    def __post_init__(self):
        if not self.generators:
            raise ValueError("a state set needs at least one generator")
        dims = self.generators[0].dims
        for g in self.generators:
            if g.dims != dims:
                raise DimensionMismatch("state set generators disagree on dims")

    @property
    def dims(self):
        return self.generators[0].dims


@dataclass(frozen=True)
class RestrictedGate:
    """A global target channel together with the inputs it must act on."""

    target: QuantumChannel
    inputs: StateSet

    def __post_init__(self):
        if self.target.acts_on != "AB":
            raise ValueError("a restricted gate's target is a joint channel")
        d = self.inputs.dims
        if self.target.kraus[0].shape[1] != d[0] * d[1]:
            raise DimensionMismatch("gate target does not match the input dimensions")


def _apply_kraus_set(mat, kraus):
    out = None
    for k in kraus:
        term = k @ mat @ k.conj().T
        out = term if out is None else out + term
    return out


def _pad_to_side(k, regs_dim, q_dim, side_dim):
    """Lift a local operator to the party's full side.

    k may address the party's quantum factor (identity-padded over that
    party's registers) or the full side, registers included.
    """
    din = k.shape[1]
    if din == q_dim:
        return np.kron(np.eye(regs_dim, dtype=np.complex128), k)
    if din == side_dim:
        return k
    raise DimensionMismatch(
        f"operator input dim {din} matches neither the quantum factor "
        f"{q_dim} nor the full side {side_dim}"
    )


def _pad_to_joint(side_op, party, other_dim):
    eye_other = np.eye(other_dim, dtype=np.complex128)
    if party == "A":
        return np.kron(side_op, eye_other)
    return np.kron(eye_other, side_op)


def simulate(protocol: LoccProtocol, rho: DensityMatrix) -> DensityMatrix:
    """Run a protocol on a state and trace out all classical registers."""
    q_a, q_b = rho.dims
    regs_a: list[int] = []
    regs_b: list[int] = []
    mat = np.array(rho.entries)

    for step in protocol.steps:
        party = step.party
        ra, rb = prod(regs_a) if regs_a else 1, prod(regs_b) if regs_b else 1
        da, db = ra * q_a, rb * q_b
        regs_dim, q_dim, side_dim = (ra, q_a, da) if party == "A" else (rb, q_b, db)
        other_dim = db if party == "A" else da

        op = step.operation
        if isinstance(op, Instrument):
            n = op.n_outcomes
            full = []
            for a, grp in enumerate(op.groups):
                flag = np.zeros((n, 1), dtype=np.complex128)
                flag[a, 0] = 1.0
                for k in grp:
                    side = np.kron(flag, _pad_to_side(k, regs_dim, q_dim, side_dim))
                    full.append(_pad_to_joint(side, party, other_dim))
            mat = _apply_kraus_set(mat, full)
            if party == "A":
                regs_a.insert(0, n)
            else:
                regs_b.insert(0, n)

            if step.message_dim:
                m = step.message_dim
                symbols = step.message_map or tuple(range(n))
                if len(symbols) < n or max(symbols) >= m or min(symbols) < 0:
                    raise MessageOverflow(
                        f"{n} outcomes do not fit a message of dimension {m}"
                    )
                ra2 = prod(regs_a) if regs_a else 1
                rb2 = prod(regs_b) if regs_b else 1
                da2, db2 = ra2 * q_a, rb2 * q_b
                copies = []
                for a in range(n):
                    proj = np.zeros((n, n), dtype=np.complex128)
                    proj[a, a] = 1.0
                    ket = np.zeros((m, 1), dtype=np.complex128)
                    ket[symbols[a], 0] = 1.0
                    if party == "A":
                        # flag is the slowest factor of side A
                        src = np.kron(proj, np.eye(da2 // n, dtype=np.complex128))
                        dst = np.kron(ket, np.eye(db2, dtype=np.complex128))
                        copies.append(np.kron(src, dst))
                    else:
                        src = np.kron(proj, np.eye(db2 // n, dtype=np.complex128))
                        dst = np.kron(ket, np.eye(da2, dtype=np.complex128))
                        copies.append(np.kron(dst, src))
                mat = _apply_kraus_set(mat, copies)
                if party == "A":
                    regs_b.insert(0, m)
                else:
                    regs_a.insert(0, m)
        else:
            kraus = [
                _pad_to_joint(_pad_to_side(k, regs_dim, q_dim, side_dim), party, other_dim)
                for k in op.kraus
            ]
            dout = op.kraus[0].shape[0]
            din = op.kraus[0].shape[1]
            if din == q_dim and dout != din:
                if party == "A":
                    q_a = dout
                else:
                    q_b = dout
            elif din == side_dim and dout != din:
                raise DimensionMismatch(
                    "an operation on a full side (registers included) must be square"
                )
            mat = _apply_kraus_set(mat, kraus)

    ra = prod(regs_a) if regs_a else 1
    rb = prod(regs_b) if regs_b else 1
    full = mat.reshape(ra, q_a, rb, q_b, ra, q_a, rb, q_b)
    reduced = np.einsum("risbrjsc->ibjc", full)
    return make_density(reduced.reshape(q_a * q_b, q_a * q_b), (q_a, q_b))


def implements_report(gate: RestrictedGate, protocol: LoccProtocol):
    """Per-generator trace distance between the protocol and the target."""
    dists = []
    for gen in gate.inputs.generators:
        want = apply_channel(gen, gate.target)
        got = simulate(protocol, gen)
        if want.dims != got.dims:
            raise DimensionMismatch("protocol output dims differ from the target's")
        dists.append(float(kernels.trace_distance(got.entries, want.entries)))
    return dists


def implements(gate: RestrictedGate, protocol: LoccProtocol, tol=1e-7) -> bool:
    """Whether the protocol reproduces the gate on every generator."""
    return max(implements_report(gate, protocol)) < tol


def reversibility_check(gate: RestrictedGate, tol=1e-6):
    """Pairwise relative entropies among generators before vs after the gate.

    Preservation in both orders is necessary for a classical-message-only
    implementation to exist; it is not sufficient. Infinite values must be
    matched by infinite values. Returns (ok, violations) where each
    violation records (i, j, before, after).
    """
    gens = gate.inputs.generators
    outs = [apply_channel(g, gate.target) for g in gens]
    violations = []
    for i in range(len(gens)):
        for j in range(len(gens)):
            if i == j:
                continue
            before = relative_entropy(gens[i], gens[j])
            after = relative_entropy(outs[i], outs[j])
            if np.isinf(before) or np.isinf(after):
                if np.isinf(before) != np.isinf(after):
                    violations.append((i, j, float(before), float(after)))
                continue
            if abs(before - after) > tol:
                violations.append((i, j, float(before), float(after)))
    return (not violations), violations


@dataclass(frozen=True)
class LocalSearchResult:
    found: bool
    status: str
    residual: float
    channel_a: QuantumChannel | None
    channel_b: QuantumChannel | None


def fully_local_search(gate: RestrictedGate, opt: OptimizerConfig | None = None,
                       channel_ranks=None) -> LocalSearchResult:
    """Search for uncorrelated local maps A x B reproducing the gate.

    By default the ansatz is a pair of local unitaries; channel_ranks
    (k_a, k_b) switches to local channels with that many Kraus operators a
    side. Success means worst-generator trace distance below 1e-6. Failure
    is a heuristic certificate only: it reports that nothing was found at
    this restart budget, never impossibility.
    """
    opt = opt or OptimizerConfig()
    d_a, d_b = gate.inputs.dims
    gens = [g.entries for g in gate.inputs.generators]
    outs = [apply_channel(g, gate.target).entries for g in gate.inputs.generators]
    m = len(gens)
    mats = stack_mats(gens + outs)
    if channel_ranks is None:
        n_params = d_a * d_a + d_b * d_b
        x, best = run_multistart(
            kernels.K_LOCAL_U_RESIDUAL, mats, [d_a, d_b, m], [0.0], n_params, opt
        )
        u_a = kernels.unitary_from_params(x[: d_a * d_a], d_a)
        u_b = kernels.unitary_from_params(x[d_a * d_a :], d_b)
        ch_a = make_channel([u_a], "A", (d_a, d_b))
        ch_b = make_channel([u_b], "B", (d_a, d_b))
    else:
        k_a, k_b = channel_ranks
        n_a = (k_a * d_a) ** 2
        n_params = n_a + (k_b * d_b) ** 2
        x, best = run_multistart(
            kernels.K_LOCAL_CH_RESIDUAL, mats, [d_a, d_b, m, k_a, k_b], [0.0],
            n_params, opt,
        )
        blocks_a = kernels.isometry_blocks(x[:n_a], d_a, k_a)
        blocks_b = kernels.isometry_blocks(x[n_a:], d_b, k_b)
        ch_a = make_channel(list(blocks_a), "A", (d_a, d_b))
        ch_b = make_channel(list(blocks_b), "B", (d_a, d_b))
    found = best < FOUND_TOL
    status = "found" if found else f"not_found_after_{opt.restarts}_restarts"
    return LocalSearchResult(found, status, float(best), ch_a, ch_b)


def _is_product(rho: DensityMatrix) -> bool:
    marg = np.kron(partial_trace(rho, "A").entries, partial_trace(rho, "B").entries)
    return np.abs(rho.entries - marg).max() <= PRODUCT_TOL


@dataclass(frozen=True)
class ProbeReport:
    verdict: str
    failing_hypothesis: str | None
    h1_product_generator: bool
    h2_discordant_generator: bool
    h3_discord_changed: bool
    reversible_necessary: bool
    discord_change: float
    search: LocalSearchResult | None


def theorem2_probe(gate: RestrictedGate, opt: OptimizerConfig | None = None,
                   discord_change_tol=1e-3, run_search=True) -> ProbeReport:
    """Check the hypotheses under which the gate cannot be run on classical
    messages alone.

    h1: some generator is a product state (the reference tau). h2: some
    generator is 2-discordant with finite relative entropy to tau. h3: the
    gate changes that generator's discord by more than discord_change_tol.
    When all hold the verdict is requires_entanglement_or_nonreversible,
    corroborated (not proven) by an uncorrelated local search; otherwise
    hypotheses_not_met with the first failing hypothesis named.
    """
    opt = opt or OptimizerConfig()
    gens = gate.inputs.generators

    tau = next((g for g in gens if _is_product(g)), None)
    h1 = tau is not None
    h2 = False
    h3 = False
    change = 0.0
    if h1:
        for g in gens:
            verdict = is_k_classical(g, MeasurementClass.all_measurements(), opt=opt)
            if verdict.is_classical:
                continue
            if np.isinf(relative_entropy(g, tau)):
                continue
            h2 = True
            before = discord_oz(g, opt)
            after = discord_oz(apply_channel(g, gate.target), opt)
            delta = abs(after - before)
            if delta > change:
                change = delta
            if delta > discord_change_tol:
                h3 = True
    reversible, _ = reversibility_check(gate)

    if h1 and h2 and h3:
        search = fully_local_search(gate, opt) if run_search else None
        return ProbeReport(
            verdict="requires_entanglement_or_nonreversible",
            failing_hypothesis=None,
            h1_product_generator=True,
            h2_discordant_generator=True,
            h3_discord_changed=True,
            reversible_necessary=reversible,
            discord_change=change,
            search=search,
        )
    failing = "h1" if not h1 else ("h2" if not h2 else "h3")
    return ProbeReport(
        verdict="hypotheses_not_met",
        failing_hypothesis=failing,
        h1_product_generator=h1,
        h2_discordant_generator=h2,
        h3_discord_changed=h3,
        reversible_necessary=reversible,
        discord_change=change,
        search=None,
    )


@dataclass(frozen=True)
class NmrStepEntry:
    level: float
    discord_before: float
    discord_after: float
    two_classical_before: bool
    two_classical_after: bool

    @property
    def discord_change(self) -> float:
        return abs(self.discord_after - self.discord_before)


@dataclass(frozen=True)
class NmrStep:
    index: int
    entries: tuple[NmrStepEntry, ...]


@dataclass(frozen=True)
class NmrReport:
    levels: tuple[float, ...]
    steps: tuple[NmrStep, ...]
    flagged_step: int | None


def nmr_scenario(rho0: DensityMatrix, gates, noise_levels,
                 opt: OptimizerConfig | None = None,
                 discord_change_tol=1e-3) -> NmrReport:
    """Track discord and 2-classicality of a noisy family through a gate
    sequence, in the style of highly mixed ensemble experiments.

    rho0 must be a product state; the family is (1-N) rho0 + N I/d over
    the given noise levels, with N = 1 (the product reference) always
    included. A step is flagged when some family member that is
    2-discordant at its input or output has its discord changed by more
    than discord_change_tol; the report names the first such step.
    """
    opt = opt or OptimizerConfig()
    if not _is_product(rho0):
        raise NotProductInput("the noisy family is anchored to a product state")
    levels = list(noise_levels)
    if not any(abs(lv - 1.0) <= 1e-12 for lv in levels):
        levels.append(1.0)
    states = {lv: noisy_family(rho0, lv) for lv in levels}

    all_cls = MeasurementClass.all_measurements()
    discord = {lv: discord_oz(states[lv], opt) for lv in levels}
    twocl = {lv: is_k_classical(states[lv], all_cls, opt=opt).is_classical for lv in levels}

    steps = []
    flagged = None
    for idx, gate in enumerate(gates):
        entries = []
        for lv in levels:
            nxt = apply_channel(states[lv], gate)
            d_after = discord_oz(nxt, opt)
            c_after = is_k_classical(nxt, all_cls, opt=opt).is_classical
            entries.append(NmrStepEntry(
                level=float(lv),
                discord_before=discord[lv],
                discord_after=d_after,
                two_classical_before=twocl[lv],
                two_classical_after=c_after,
            ))
            states[lv] = nxt
            discord[lv] = d_after
            twocl[lv] = c_after
        step = NmrStep(index=idx, entries=tuple(entries))
        steps.append(step)
        if flagged is None:
            for e in step.entries:
                discordant = (not e.two_classical_before) or (not e.two_classical_after)
                if discordant and e.discord_change > discord_change_tol:
                    flagged = idx
                    break
    return NmrReport(levels=tuple(float(lv) for lv in levels),
                     steps=tuple(steps), flagged_step=flagged)
