"""Regenerate the JSON fixtures bundled with the package.

Run from the repository root:  python3 tools/make_fixtures.py
Outputs are committed; this script only exists to document where they
came from and to rebuild them if the formats change.
"""
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from qcorr import serialize
from qcorr.locc import LoccProtocol, ProtocolStep
from qcorr.measurements import projective_instrument
from qcorr.qstate import (
    apply_channel,
    bell_pair,
    make_channel,
    make_density,
    maximally_mixed,
    noisy_family,
    pure_density,
    random_unitary,
    tensor,
    unitary_channel,
)

OUT = Path(__file__).resolve().parent.parent / "src" / "qcorr" / "fixtures"

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


def save_state(rho, name):
    serialize.save_json(serialize.state_to_dict(rho), OUT / name)


def save_channel(ch, name):
    serialize.save_json(serialize.channel_to_dict(ch), OUT / name)


def main():
    OUT.mkdir(parents=True, exist_ok=True)

    # --- states -------------------------------------------------------------
    save_state(bell_pair(), "bell.json")

    # correlated but undisturbed by a computational-basis readout on A
    sig0 = pure_density(KET0, 2)
    sigp = pure_density(PLUS, 2)
    classical = make_density(
        0.6 * tensor(pure_density(KET0, 2), sig0).entries
        + 0.4 * tensor(pure_density(KET1, 2), sigp).entries,
        (2, 2),
    )
    save_state(classical, "classical.json")

    save_state(noisy_family(bell_pair(), 0.5), "werner_half.json")

    # two-qutrit state whose conditional family splits into a rank-2 and a
    # rank-1 block: entangled on the 01 sector, classical flag on |22>
    phi = np.zeros(9, dtype=np.complex128)
    phi[0] = phi[4] = 1.0 / np.sqrt(2.0)
    m = 0.5 * np.outer(phi, phi.conj())
    m[8, 8] += 0.5
    save_state(make_density(m, (3, 3)), "qutrit_block.json")

    for vec_a, vec_b, name in [
        (KET0, KET0, "product_00.json"),
        (KET0, KET1, "product_01.json"),
        (KET1, KET0, "product_10.json"),
        (KET1, KET1, "product_11.json"),
        (KET0, PLUS, "product_0plus.json"),
        (PLUS, KET0, "product_plus0.json"),
    ]:
        save_state(tensor(pure_density(vec_a, 2), pure_density(vec_b, 2)), name)

    save_state(maximally_mixed((2, 2)), "uniform_two_qubit.json")

    cnot_ch = make_channel([CNOT], "AB", (2, 2))
    src = make_density(
        0.5 * tensor(sigp, sig0).entries + 0.5 * tensor(sig0, sig0).entries,
        (2, 2),
    )
    disc = apply_channel(src, cnot_ch)
    save_state(disc, "discordant.json")
    save_state(noisy_family(disc, 0.3), "noisy_discordant.json")

    # --- channels and gates ---------------------------------------------------
    save_channel(cnot_ch, "cnot_channel.json")

    ua = random_unitary(2, seed=11)
    ub = random_unitary(2, seed=12)
    local_ch = unitary_channel(np.kron(ua, ub), "AB", (2, 2))
    save_channel(local_ch, "local_unitary_channel.json")

    probe_states = ["uniform_two_qubit.json", "noisy_discordant.json"]
    serialize.save_json(
        {"target": serialize.channel_to_dict(cnot_ch),
         "input_states": probe_states},
        OUT / "gate_cnot_probe.json",
    )
    serialize.save_json(
        {"target": serialize.channel_to_dict(local_ch),
         "input_states": probe_states},
        OUT / "gate_local_probe.json",
    )
    serialize.save_json(
        {"target": serialize.channel_to_dict(cnot_ch),
         "input_states": ["bell.json"]},
        OUT / "gate_bell_only.json",
    )

    # --- protocol: readout on A, conditional flip on B ------------------------
    # the B round acts on message x qB, so its Kraus matrix is 4x4 and its
    # declared B dimension is 4
    cx_on_msg = CNOT.copy()
    readout = projective_instrument(np.eye(2, dtype=np.complex128), "A")
    protocol = LoccProtocol((
        ProtocolStep("A", readout, message_dim=2),
        ProtocolStep("B", make_channel([cx_on_msg], "B", (2, 4))),
    ))
    serialize.save_json(serialize.protocol_to_dict(protocol),
                        OUT / "cnot_protocol.json")

    # --- pulse sequence: one-qubit mixer then the entangling gate -------------
    hadamard = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2.0)
    seq = [unitary_channel(hadamard, "A", (2, 2)), cnot_ch]
    serialize.save_json(
        {"gates": [serialize.channel_to_dict(g) for g in seq]},
        OUT / "nmr_sequence.json",
    )

    print(f"wrote {len(list(OUT.glob('*.json')))} fixture files to {OUT}")


if __name__ == "__main__":
    main()
