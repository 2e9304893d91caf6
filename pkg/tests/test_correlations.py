import json
from pathlib import Path

import numpy as np
import pytest

from qcorr import (
    DimensionMismatch,
    OptimizerConfig,
    bell_pair,
    classical_correlation,
    discord_mi,
    discord_oz,
    entropy,
    make_density,
    maximally_mixed,
    measure_and_condition,
    mutual_information,
    noisy_family,
    pure_density,
    random_density,
    relative_entropy,
    tensor,
)
from qcorr.measurements import projective_instrument

import oracles

GOLDENS = json.loads(
    (Path(__file__).parent / "goldens.json").read_text(encoding="utf-8"))

OPT = OptimizerConfig(restarts=20, seed=0)


def test_entropy_values():
    assert abs(entropy(maximally_mixed(2)) - 1.0) < 1e-12
    assert abs(entropy(pure_density(np.array([0.6, 0.8]), 2))) < 1e-12
    rho = make_density(np.diag([0.5, 0.25, 0.25]).astype(np.complex128), (3, 1))
    assert abs(entropy(rho) - 1.5) < 1e-12


def test_relative_entropy_values():
    rho = random_density((2, 2), seed=1)
    assert abs(relative_entropy(rho, rho)) < 1e-9
    zero = pure_density(np.array([1.0, 0.0]), 2)
    one = pure_density(np.array([0.0, 1.0]), 2)
    assert np.isinf(relative_entropy(zero, one))
    assert abs(relative_entropy(zero, maximally_mixed(2)) - 1.0) < 1e-12
    with pytest.raises(DimensionMismatch):
        relative_entropy(zero, maximally_mixed((2, 2)))


def test_mutual_information_values():
    prod = tensor(random_density(2, seed=2), random_density(2, seed=3))
    assert abs(mutual_information(prod)) < 1e-10
    assert abs(mutual_information(bell_pair()) - 2.0) < 1e-12
    m = np.zeros((4, 4), dtype=np.complex128)
    m[0, 0] = m[3, 3] = 0.5
    assert abs(mutual_information(make_density(m, (2, 2))) - 1.0) < 1e-12


def test_measure_and_condition_classical_mixture():
    m = np.zeros((4, 4), dtype=np.complex128)
    m[0, 0] = m[3, 3] = 0.5
    rho = make_density(m, (2, 2))
    inst = projective_instrument(np.eye(2, dtype=np.complex128), "A")
    ens = measure_and_condition(rho, inst)
    assert len(ens.outcomes) == 2
    for a, (p, cond) in enumerate(ens.outcomes):
        assert abs(p - 0.5) < 1e-12
        want = np.zeros((2, 2))
        want[a, a] = 1.0
        assert np.allclose(cond.entries, want)


def test_measure_and_condition_product_state():
    b = random_density(2, seed=8)
    rho = tensor(random_density(2, seed=7), b)
    inst = projective_instrument(np.eye(2, dtype=np.complex128), "A")
    for _p, cond in measure_and_condition(rho, inst).outcomes:
        assert np.allclose(cond.entries, b.entries, atol=1e-12)


def test_measure_and_condition_trivial_instrument():
    from qcorr.measurements import make_instrument
    rho = bell_pair()
    triv = make_instrument([[np.eye(2, dtype=np.complex128)]], "A")
    ens = measure_and_condition(rho, triv)
    assert len(ens.outcomes) == 1
    p, cond = ens.outcomes[0]
    assert abs(p - 1.0) < 1e-12
    assert np.allclose(cond.entries, np.eye(2) / 2)


def test_classical_correlation_bell():
    j, witness = classical_correlation(bell_pair(), OPT)
    assert abs(j - 1.0) < 1e-9
    assert witness.acts_on == "A"


def test_classical_correlation_matches_grid_oracle():
    for seed in (4, 9):
        rho = random_density((2, 2), seed=seed)
        j, _ = classical_correlation(rho, OPT)
        grid = oracles.grid_classical_correlation(rho.entries, 181, 361)
        assert j >= grid - 1e-6
        assert abs(j - grid) < 5e-4


def test_werner_point_against_frozen_grid_values():
    werner = noisy_family(bell_pair(), 0.5)
    j, _ = classical_correlation(werner, OPT)
    assert abs(j - GOLDENS["werner_half"]["J"]) < 1e-9
    d = discord_oz(werner, OPT)
    assert abs(d - GOLDENS["werner_half"]["discord"]) < 1e-9


def test_discord_bell_and_product():
    assert abs(discord_oz(bell_pair(), OPT) - 1.0) < 1e-9
    assert abs(discord_mi(bell_pair(), OPT) - 1.0) < 1e-9
    prod = tensor(random_density(2, seed=5), random_density(2, seed=6))
    assert discord_oz(prod, OPT) < 1e-9
    assert discord_mi(prod, OPT) < 1e-9


def test_discord_definitions_agree_small_batch():
    for seed in range(8):
        rho = random_density((2, 2), seed=100 + seed)
        a = discord_oz(rho, OPT)
        b = discord_mi(rho, OPT)
        assert abs(a - b) < 1e-6


def test_discord_nonnegative_and_clipped():
    for seed in range(5):
        rho = random_density((2, 2), rank=1, seed=40 + seed)
        assert discord_oz(rho, OPT) >= 0.0


def test_povm_search_not_worse_than_projective():
    rho = random_density((2, 2), seed=12)
    j_proj, _ = classical_correlation(rho, OPT)
    j_povm, witness = classical_correlation(
        rho, OptimizerConfig(restarts=12, seed=0, povm=True))
    assert j_povm >= j_proj - 1e-6
    assert len(witness.povm) >= 2
