import numpy as np
import pytest

from qcorr import (
    LoccProtocol,
    NotProductInput,
    OptimizerConfig,
    ProtocolStep,
    RestrictedGate,
    StateSet,
    bell_pair,
    fully_local_search,
    implements,
    implements_report,
    make_channel,
    make_density,
    maximally_mixed,
    nmr_scenario,
    noisy_family,
    projective_instrument,
    pure_density,
    random_density,
    random_unitary,
    reversibility_check,
    simulate,
    tensor,
    theorem2_probe,
    unitary_channel,
)
from qcorr.errors import MessageOverflow
from qcorr.kernels import trace_distance

OPT = OptimizerConfig(restarts=12, seed=0)

KET0 = np.array([1.0, 0.0], dtype=np.complex128)
KET1 = np.array([0.0, 1.0], dtype=np.complex128)
PLUS = np.array([1.0, 1.0], dtype=np.complex128) / np.sqrt(2.0)

CNOT = np.array(
    [[1, 0, 0, 0],
     [0, 1, 0, 0],
     [0, 0, 0, 1],
     [0, 0, 1, 0]],
    dtype=np.complex128,
)


def _cnot_gate(gens):
    return RestrictedGate(make_channel([CNOT], "AB", (2, 2)),
                          StateSet(tuple(gens)))


def _classical_generators():
    return [tensor(pure_density(a, 2), pure_density(b, 2))
            for a in (KET0, KET1) for b in (KET0, KET1)]


def _cnot_protocol():
    readout = projective_instrument(np.eye(2, dtype=np.complex128), "A")
    return LoccProtocol((
        ProtocolStep("A", readout, message_dim=2),
        ProtocolStep("B", make_channel([CNOT.copy()], "B", (2, 4))),
    ))


def test_simulate_local_unitaries_no_messages():
    ua, ub = random_unitary(2, seed=1), random_unitary(2, seed=2)
    protocol = LoccProtocol((
        ProtocolStep("A", unitary_channel(ua, "A", (2, 2))),
        ProtocolStep("B", unitary_channel(ub, "B", (2, 2))),
    ))
    rho = random_density((2, 2), seed=3)
    out = simulate(protocol, rho)
    big = np.kron(ua, ub)
    assert trace_distance(out.entries, big @ rho.entries @ big.conj().T) < 1e-12


def test_simulate_empty_protocol_is_identity():
    rho = random_density((2, 2), seed=4)
    out = simulate(LoccProtocol(()), rho)
    assert np.allclose(out.entries, rho.entries)


def test_protocol_requires_a_first_alternation():
    ch = unitary_channel(np.eye(2, dtype=np.complex128), "B", (2, 2))
    with pytest.raises(ValueError):
        LoccProtocol((ProtocolStep("B", ch),))


def test_classical_cnot_protocol_exact_on_generators():
    gate = _cnot_gate(_classical_generators())
    dists = implements_report(gate, _cnot_protocol())
    assert max(dists) < 1e-12
    assert implements(gate, _cnot_protocol())


def test_classical_cnot_protocol_fails_off_the_set():
    gens = _classical_generators()
    gens.append(tensor(pure_density(PLUS, 2), pure_density(KET0, 2)))
    gate = _cnot_gate(gens)
    dists = implements_report(gate, _cnot_protocol())
    assert max(dists[:4]) < 1e-12
    assert dists[4] > 0.1
    assert not implements(gate, _cnot_protocol())


def test_message_overflow_guard():
    readout = projective_instrument(np.eye(2, dtype=np.complex128), "A")
    step = ProtocolStep("A", readout, message_dim=1)
    with pytest.raises(MessageOverflow):
        simulate(LoccProtocol((step,)), random_density((2, 2), seed=5))


def test_reversibility_trace_and_replace_fails():
    # every input is replaced by |00><00|, so all pairwise distances collapse
    kraus = [np.zeros((4, 4), dtype=np.complex128) for _ in range(4)]
    for b in range(4):
        kraus[b][0, b] = 1.0
    gate = RestrictedGate(
        make_channel(kraus, "AB", (2, 2)),
        StateSet((tensor(pure_density(KET0, 2), pure_density(KET0, 2)),
                  tensor(pure_density(KET1, 2), pure_density(PLUS, 2)))),
    )
    ok, violations = reversibility_check(gate)
    assert not ok
    assert violations


def test_reversibility_dephasing_on_diagonal_set():
    projs = [np.diag([1.0, 0.0]).astype(np.complex128),
             np.diag([0.0, 1.0]).astype(np.complex128)]
    big = [np.kron(p, np.eye(2, dtype=np.complex128)) for p in projs]
    gate = RestrictedGate(
        make_channel(big, "AB", (2, 2)),
        StateSet((tensor(pure_density(KET0, 2), pure_density(KET0, 2)),
                  tensor(pure_density(KET1, 2), pure_density(KET1, 2)))),
    )
    ok, violations = reversibility_check(gate)
    assert ok and not violations


def test_fully_local_search_finds_local_unitary():
    ua, ub = random_unitary(2, seed=6), random_unitary(2, seed=7)
    gate = RestrictedGate(
        unitary_channel(np.kron(ua, ub), "AB", (2, 2)),
        StateSet((random_density((2, 2), seed=8),
                  random_density((2, 2), seed=9))),
    )
    res = fully_local_search(gate, OptimizerConfig(restarts=20, seed=0))
    assert res.found
    assert res.residual < 1e-8
    assert res.channel_a is not None and res.channel_b is not None


def test_fully_local_search_identity_gate():
    gate = RestrictedGate(
        unitary_channel(np.eye(4, dtype=np.complex128), "AB", (2, 2)),
        StateSet((random_density((2, 2), seed=10),)),
    )
    res = fully_local_search(gate, OPT)
    assert res.found and res.residual < 1e-8


def test_probe_cnot_requires_more_than_local_maps():
    src = make_density(
        0.5 * tensor(pure_density(PLUS, 2), pure_density(KET0, 2)).entries
        + 0.5 * tensor(pure_density(KET0, 2), pure_density(KET0, 2)).entries,
        (2, 2))
    disc = make_density(CNOT @ src.entries @ CNOT.conj().T, (2, 2))
    gate = _cnot_gate([maximally_mixed((2, 2)), noisy_family(disc, 0.3)])
    rep = theorem2_probe(gate, OPT, run_search=False)
    assert rep.verdict == "requires_entanglement_or_nonreversible"
    assert rep.h1_product_generator
    assert rep.h2_discordant_generator
    assert rep.h3_discord_changed
    assert rep.reversible_necessary
    assert rep.discord_change > 1e-3


def test_probe_local_unitary_fails_h3():
    ua, ub = random_unitary(2, seed=11), random_unitary(2, seed=12)
    gate = RestrictedGate(
        unitary_channel(np.kron(ua, ub), "AB", (2, 2)),
        StateSet((maximally_mixed((2, 2)),
                  random_density((2, 2), seed=13))),
    )
    rep = theorem2_probe(gate, OPT, run_search=False)
    assert rep.verdict == "hypotheses_not_met"
    assert rep.failing_hypothesis == "h3"


def test_probe_without_product_generator_fails_h1():
    gate = _cnot_gate([bell_pair()])
    rep = theorem2_probe(gate, OPT, run_search=False)
    assert rep.verdict == "hypotheses_not_met"
    assert rep.failing_hypothesis == "h1"
    assert not rep.h1_product_generator


def test_nmr_flags_the_entangling_step():
    rho0 = tensor(pure_density(KET0, 2), pure_density(KET0, 2))
    hadamard = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
    gates = [unitary_channel(hadamard, "A", (2, 2)),
             make_channel([CNOT], "AB", (2, 2))]
    rep = nmr_scenario(rho0, gates, [0.0, 0.5], OPT)
    assert rep.flagged_step == 1
    assert rep.levels == (0.0, 0.5, 1.0)
    flagged = rep.steps[1]
    lvl0 = flagged.entries[0]
    assert abs(lvl0.discord_after - 1.0) < 1e-6
    assert lvl0.two_classical_before and not lvl0.two_classical_after


def test_nmr_local_unitaries_never_flag():
    rho0 = tensor(pure_density(KET0, 2), pure_density(PLUS, 2))
    gates = [unitary_channel(random_unitary(2, seed=s), "A" if s % 2 else "B",
                             (2, 2))
             for s in range(3)]
    rep = nmr_scenario(rho0, gates, [0.0, 0.5], OPT)
    assert rep.flagged_step is None


def test_nmr_uniform_level_only_never_flags():
    rho0 = tensor(pure_density(KET0, 2), pure_density(KET0, 2))
    hadamard = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
    gates = [unitary_channel(hadamard, "A", (2, 2)),
             make_channel([CNOT], "AB", (2, 2))]
    rep = nmr_scenario(rho0, gates, [1.0], OPT)
    assert rep.flagged_step is None


def test_nmr_rejects_correlated_start():
    gates = [make_channel([CNOT], "AB", (2, 2))]
    with pytest.raises(NotProductInput):
        nmr_scenario(bell_pair(), gates, [0.0], OPT)
