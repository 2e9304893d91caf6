import json
from pathlib import Path

import numpy as np
import pytest

from qcorr import (
    OptimizerConfig,
    VanishingClassWarning,
    bell_pair,
    commutant_blocks,
    discord_mi,
    is_k_classical,
    k_discord,
    make_density,
    make_instrument,
    mi_drop,
    mutual_information,
    projective_instrument,
    random_classical_density,
    random_density,
    rel_entropy_to_classical,
    tensor,
    thermal_k_discord,
)
from qcorr.measurements import MeasurementClass

import oracles

GOLDENS = json.loads(
    (Path(__file__).parent / "goldens.json").read_text(encoding="utf-8"))

OPT = OptimizerConfig(restarts=16, seed=0)


def _qutrit_fixture():
    phi = np.zeros(9, dtype=np.complex128)
    phi[0] = phi[4] = 1.0 / np.sqrt(2.0)
    m = 0.5 * np.outer(phi, phi.conj())
    m[8, 8] += 0.5
    return make_density(m, (3, 3))


def test_mi_drop_values():
    comp = projective_instrument(np.eye(2, dtype=np.complex128), "A")
    assert abs(mi_drop(bell_pair(), comp) - 1.0) < 1e-12
    triv = make_instrument([[np.eye(2, dtype=np.complex128)]], "A")
    assert abs(mi_drop(bell_pair(), triv)) < 1e-12
    assert mi_drop(random_density((2, 2), seed=3), comp) >= 0.0


def test_commutant_blocks_bell_is_single_block():
    blocks = commutant_blocks(bell_pair())
    assert len(blocks) == 1
    assert np.abs(blocks[0] - np.eye(2)).max() < 1e-9


def test_commutant_blocks_classical_state_splits():
    rho = random_classical_density((2, 2), seed=4)
    blocks = commutant_blocks(rho)
    assert len(blocks) == 2
    for p in blocks:
        assert abs(np.trace(p).real - 1.0) < 1e-9
        assert np.abs(p @ p - p).max() < 1e-8


def test_commutant_blocks_qutrit_ranks():
    blocks = commutant_blocks(_qutrit_fixture())
    ranks = sorted(int(round(np.trace(p).real)) for p in blocks)
    assert ranks == [1, 2]


def test_commutant_blocks_fix_the_state():
    for seed in (0, 1):
        rho = random_classical_density((2, 2), seed=seed)
        blocks = commutant_blocks(rho)
        deph = sum(np.kron(p, np.eye(2)) @ rho.entries @ np.kron(p, np.eye(2))
                   for p in blocks)
        assert np.abs(deph - rho.entries).max() < 1e-9


def test_is_k_classical_classical_state():
    rho = random_classical_density((2, 2), seed=7)
    v = is_k_classical(rho, MeasurementClass.rank1(), opt=OPT)
    assert v.is_classical
    assert v.witness is not None
    assert abs(v.mi_after - v.mi_before) < 1e-7


def test_is_k_classical_bell_all_false():
    v = is_k_classical(bell_pair(), MeasurementClass.all_measurements(), opt=OPT)
    assert not v.is_classical
    assert v.mi_before > v.mi_after - 1e-12


def test_is_k_classical_qutrit_fixture():
    rho = _qutrit_fixture()
    v_all = is_k_classical(rho, MeasurementClass.all_measurements(), opt=OPT)
    assert v_all.is_classical
    assert v_all.witness is not None
    ranks = sorted(int(round(np.trace(e).real)) for e in v_all.witness.povm)
    assert ranks == [1, 2]
    v_min2 = is_k_classical(rho, MeasurementClass.min_outcomes_of(2), opt=OPT)
    assert v_min2.is_classical
    v_rank1 = is_k_classical(rho, MeasurementClass.rank1(), opt=OPT)
    assert not v_rank1.is_classical


def test_is_k_classical_rankr_divisibility():
    rho = _qutrit_fixture()
    v = is_k_classical(rho, MeasurementClass.rank_r(2), opt=OPT)
    assert not v.is_classical
    assert v.witness is None


def test_k_discord_rank1_matches_discord():
    for seed in range(5):
        rho = random_density((2, 2), seed=300 + seed)
        kd = k_discord(rho, MeasurementClass.rank1(), OPT)
        dm = discord_mi(rho, OPT)
        assert abs(kd - dm) < 1e-6


def test_k_discord_warns_for_outcome_count_classes():
    with pytest.warns(VanishingClassWarning):
        kd = k_discord(bell_pair(), MeasurementClass.min_outcomes_of(2), OPT)
    assert kd < 1e-3


def test_thermal_k_discord_values():
    triv = make_instrument([[np.eye(2, dtype=np.complex128)]], "A")
    assert abs(thermal_k_discord(bell_pair(), triv)) < 1e-12
    comp = projective_instrument(np.eye(2, dtype=np.complex128), "A")
    assert abs(thermal_k_discord(bell_pair(), comp) - 1.0) < 1e-12


def test_thermal_k_discord_classical_dephasing_zero():
    rho = random_classical_density((2, 2), seed=9)
    blocks = commutant_blocks(rho)
    inst = make_instrument([[p] for p in blocks], "A")
    assert abs(thermal_k_discord(rho, inst)) < 1e-9


def test_rel_entropy_to_classical_bell():
    val = rel_entropy_to_classical(bell_pair(), OPT)
    assert abs(val - 1.0) < 1e-7
    grid = oracles.grid_rel_entropy_to_classical(bell_pair().entries, 63, 126)
    assert abs(grid - 1.0) < 1e-9


def test_rel_entropy_to_classical_product_zero():
    prod = tensor(random_density(2, seed=2), random_density(2, seed=4))
    assert rel_entropy_to_classical(prod, OPT) < 1e-8


def test_mi_after_reports_best_retention():
    rho = random_density((2, 2), seed=21)
    v = is_k_classical(rho, MeasurementClass.rank1(), opt=OPT)
    assert v.mi_after <= v.mi_before + 1e-12
    assert abs(v.mi_before - mutual_information(rho)) < 1e-12
