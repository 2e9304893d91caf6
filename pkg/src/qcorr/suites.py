"""Randomized consistency suites over two-qubit states and channels.

Each suite draws its trial ingredients from per-trial seed sequences spawned
off one master seed, so results are identical for any --jobs value and any
chunking: trial i always sees the same state, channel and optimizer seed.
"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .correlations import discord_mi, discord_oz
from .optimize import OptimizerConfig
from .petz import theorem1_check, verify_lemma1
from .qstate import (
    apply_channel,
    dephasing_channel,
    make_density,
    random_density,
    random_local_channel,
    random_unitary,
    unitary_channel,
    tensor,
)
from . import serialize

SUITE_NAMES = ("theorem1", "petz", "equivalence")

EQUIV_TOL = 1e-4
PETZ_EQ_TOL = 1e-7
PETZ_REC_TOL = 1e-6
PETZ_ROUNDTRIP_TOL = 1e-9


def trial_seeds(master_seed: int, trial: int, n: int) -> list[int]:
    """n independent integer seeds for one trial, stable across runs."""
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=(trial,))
    return [int(x) for x in ss.generate_state(n, dtype=np.uint64)]


@dataclass
class SuiteReport:
    suite: str
    trials: int
    seed: int
    restarts: int
    passed: bool
    stats: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "trials": self.trials,
            "seed": self.seed,
            "restarts": self.restarts,
            "passed": self.passed,
            "stats": self.stats,
            "failures": self.failures,
        }


def _run_trials(worker, trials: int, master_seed: int, restarts: int, jobs: int):
    args = [(master_seed, t, restarts) for t in range(trials)]
    if jobs <= 1:
        return [worker(a) for a in args]
    chunk = max(1, trials // (4 * jobs))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, args, chunksize=chunk))


# --- equivalence of the two discord definitions -----------------------------

def _equivalence_trial(args) -> dict:
    master_seed, trial, restarts = args
    s_state, s_opt = trial_seeds(master_seed, trial, 2)
    rank = 1 + trial % 4
    rho = random_density((2, 2), rank=rank, seed=s_state)
    opt = OptimizerConfig(restarts=restarts, seed=s_opt)
    d1 = discord_oz(rho, opt)
    d2 = discord_mi(rho, opt)
    return {"trial": trial, "rank": rank, "d_oz": d1, "d_mi": d2,
            "diff": abs(d1 - d2)}


def run_equivalence(trials: int, seed: int, restarts: int = 20,
                    jobs: int = 1) -> SuiteReport:
    rows = _run_trials(_equivalence_trial, trials, seed, restarts, jobs)
    diffs = [r["diff"] for r in rows]
    failures = [r for r in rows if r["diff"] > EQUIV_TOL]
    stats = {
        "max_diff": max(diffs) if diffs else 0.0,
        "mean_diff": float(np.mean(diffs)) if diffs else 0.0,
        "tolerance": EQUIV_TOL,
    }
    return SuiteReport("equivalence", trials, seed, restarts,
                       passed=not failures, stats=stats, failures=failures)


# --- information loss vs discord change under local channels ----------------

def _theorem1_instance(master_seed: int, trial: int):
    """The state and channel for one trial, reproducible by trial index."""
    s_state, s_chan, s_opt = trial_seeds(master_seed, trial, 3)
    rank = 2 + trial % 3
    side = "B" if trial % 2 == 0 else "A"
    n_kraus = 1 + (trial // 2) % 3
    rho = random_density((2, 2), rank=rank, seed=s_state)
    ch = random_local_channel((2, 2), n_kraus=n_kraus, seed=s_chan, acts_on=side)
    return rho, ch, side, s_opt


def _theorem1_trial(args) -> dict:
    master_seed, trial, restarts = args
    rho, ch, side, s_opt = _theorem1_instance(master_seed, trial)
    opt = OptimizerConfig(restarts=restarts, seed=s_opt)
    rec = theorem1_check(rho, ch, opt, discord_on_b=(side == "A"))
    return {
        "trial": trial,
        "side": side,
        "d_mi": rec.d_mi,
        "d_discord": rec.d_discord,
        "consistent": rec.consistent,
        "bound_ok": rec.bound_ok,
        "near_threshold": rec.near_threshold,
    }


def run_theorem1(trials: int, seed: int, restarts: int = 20,
                 jobs: int = 1) -> SuiteReport:
    rows = _run_trials(_theorem1_trial, trials, seed, restarts, jobs)
    failures = [r for r in rows if not (r["consistent"] and r["bound_ok"])]
    changing = [r for r in rows if abs(r["d_discord"]) > 1e-3]
    near = [r["trial"] for r in rows if r["near_threshold"]]
    stats = {
        "n_discord_changing": len(changing),
        "n_near_threshold": len(near),
        "near_threshold_trials": near,
        "min_d_mi_when_changing":
            min((r["d_mi"] for r in changing), default=0.0),
        "max_bound_violation":
            max((r["d_discord"] - r["d_mi"] for r in rows), default=0.0),
    }
    return SuiteReport("theorem1", trials, seed, restarts,
                       passed=not failures, stats=stats, failures=failures)


def dump_theorem1_failures(report: SuiteReport, outdir) -> None:
    """Re-derive each failing trial's ingredients and write them out."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    manifest = {"suite": "theorem1", "seed": report.seed, "cases": []}
    for row in report.failures:
        trial = row["trial"]
        rho, ch, side, s_opt = _theorem1_instance(report.seed, trial)
        state_file = f"trial{trial:05d}_state.json"
        chan_file = f"trial{trial:05d}_channel.json"
        serialize.save_json(serialize.state_to_dict(rho), outdir / state_file)
        serialize.save_json(serialize.channel_to_dict(ch), outdir / chan_file)
        manifest["cases"].append({
            "trial": trial,
            "state": state_file,
            "channel": chan_file,
            "side": side,
            "optimizer_seed": s_opt,
            "d_mi": row["d_mi"],
            "d_discord": row["d_discord"],
        })
    with open(outdir / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=1)
        fh.write("\n")


# --- recovery-map equality conditions ----------------------------------------

def _petz_instance(master_seed: int, trial: int):
    s_state, s_ref, s_chan = trial_seeds(master_seed, trial, 3)
    kind = trial % 4
    tau_a = random_density(2, seed=s_ref)
    tau_b = random_density(2, seed=s_ref + 1)
    if kind == 0:
        rho = random_density((2, 2), seed=s_state)
        ch = random_local_channel((2, 2), n_kraus=2, seed=s_chan, acts_on="A")
    elif kind == 1:
        rho = random_density((2, 2), seed=s_state)
        ch = random_local_channel((2, 2), n_kraus=3, seed=s_chan, acts_on="B")
    elif kind == 2:
        rho = random_density((2, 2), seed=s_state)
        u = random_unitary(2, seed=s_chan)
        ch = unitary_channel(u, "A", (2, 2))
    else:
        # state diagonal in the product eigenbasis of the references, and a
        # channel that only kills coherences in that same basis: nothing
        # moves, so the preserved-distance branch must trigger
        rng = np.random.default_rng(s_state)
        _, va = np.linalg.eigh(tau_a.entries)
        _, vb = np.linalg.eigh(tau_b.entries)
        probs = rng.dirichlet(np.ones(4))
        basis = np.kron(va, vb)
        rho = make_density(
            basis @ np.diag(probs.astype(np.complex128)) @ basis.conj().T,
            (2, 2),
        )
        projs = [np.outer(va[:, k], va[:, k].conj()) for k in range(2)]
        ch = dephasing_channel(projs, "A", (2, 2))
    return rho, tau_a, tau_b, ch, kind


def _petz_trial(args) -> dict:
    master_seed, trial, _restarts = args
    rho, tau_a, tau_b, ch, kind = _petz_instance(master_seed, trial)
    rep = verify_lemma1(rho, tau_a, tau_b, ch, tol=PETZ_EQ_TOL)
    equality = abs(rep.rel_entropy_before - rep.rel_entropy_after) < PETZ_EQ_TOL
    recovered = max(rep.recovery_errors) < PETZ_REC_TOL
    return {
        "trial": trial,
        "kind": kind,
        "rel_entropy_before": rep.rel_entropy_before,
        "rel_entropy_after": rep.rel_entropy_after,
        "equality": equality,
        "recovered": recovered,
        "recovery_error": max(rep.recovery_errors),
        "reference_roundtrip": rep.reference_roundtrip,
    }


def run_petz(trials: int, seed: int, restarts: int = 20,
             jobs: int = 1) -> SuiteReport:
    rows = _run_trials(_petz_trial, trials, seed, restarts, jobs)
    failures = [r for r in rows if r["equality"] != r["recovered"]]
    bad_roundtrip = [r for r in rows
                     if r["reference_roundtrip"] > PETZ_ROUNDTRIP_TOL]
    stats = {
        "n_equality": sum(r["equality"] for r in rows),
        "n_recovered": sum(r["recovered"] for r in rows),
        "max_reference_roundtrip":
            max((r["reference_roundtrip"] for r in rows), default=0.0),
        "n_bad_roundtrip": len(bad_roundtrip),
    }
    passed = not failures and not bad_roundtrip
    return SuiteReport("petz", trials, seed, restarts,
                       passed=passed, stats=stats,
                       failures=failures + bad_roundtrip)


def run_suite(name: str, trials: int, seed: int, restarts: int = 20,
              jobs: int = 1) -> SuiteReport:
    if name == "theorem1":
        return run_theorem1(trials, seed, restarts, jobs)
    if name == "petz":
        return run_petz(trials, seed, restarts, jobs)
    if name == "equivalence":
        return run_equivalence(trials, seed, restarts, jobs)
    raise ValueError(f"unknown suite {name!r}, expected one of {SUITE_NAMES}")
