"""Produce tests/goldens.json.

The Werner-point values come from the exhaustive Bloch-grid oracle in
tests/oracles.py at 1e-3 rad angular resolution, independent of the
package's own optimizer. The local-search floor is self-certified: it
records the residual the bundled probe gate reaches at 50 restarts with
seed 0, so later runs can detect regressions in either direction.

Run from the repository root:  python3 tools/make_goldens.py
"""
import json
import sys
import time
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))
sys.path.insert(0, str(ROOT / "tests"))

import oracles
from qcorr import serialize
from qcorr.fixtures import fixture_path
from qcorr.locc import fully_local_search
from qcorr.optimize import OptimizerConfig

OUT = ROOT / "tests" / "goldens.json"

N_THETA = 3143   # pi / 1e-3 rad
N_PHI = 6284     # 2 pi / 1e-3 rad


def main():
    goldens = {}

    werner = serialize.load_state(fixture_path("werner_half.json")).entries
    t0 = time.perf_counter()
    j = oracles.grid_classical_correlation(werner, N_THETA, N_PHI)
    d = oracles.grid_discord(werner, N_THETA, N_PHI)
    print(f"werner grid ({N_THETA}x{N_PHI}): J={j!r} D={d!r} "
          f"[{time.perf_counter() - t0:.0f}s]")
    goldens["werner_half"] = {
        "J": j,
        "discord": d,
        "grid": [N_THETA, N_PHI],
    }

    gate = serialize.load_gate(fixture_path("gate_cnot_probe.json"))
    t0 = time.perf_counter()
    res = fully_local_search(gate, OptimizerConfig(restarts=50, seed=0))
    print(f"local search floor: {res.residual!r} found={res.found} "
          f"[{time.perf_counter() - t0:.0f}s]")
    goldens["local_search_floor"] = {
        "residual": res.residual,
        "restarts": 50,
        "seed": 0,
    }

    with open(OUT, "w", encoding="utf-8") as fh:
        json.dump(goldens, fh, indent=1, sort_keys=True)
        fh.write("\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
