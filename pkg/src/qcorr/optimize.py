"""Multistart optimization plumbing shared by the measures and searches."""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import kernels
from .kernels.simplex import nelder_mead, restart_points


@dataclass(frozen=True)
class OptimizerConfig:
    """Knobs for every multistart search in the package.

    seed fully determines the restart points, so equal configs give
    bitwise-equal results on a fixed backend. povm switches the
    measurement searches from rank-1 projective to rank-1 POVM via an
    ancilla dilation on A.
    """

    restarts: int = 20
    max_evals: int = 2000
    tol: float = 1e-9
    seed: int = 0
    povm: bool = False

    def with_seed(self, seed) -> "OptimizerConfig":
        return replace(self, seed=int(seed))


def stack_mats(mats) -> np.ndarray:
    """Pack equal-sized matrices into the (m, D, D) context stack kernels expect."""
    out = np.ascontiguousarray(np.stack(mats), dtype=np.complex128)
    return out


def run_multistart(kind, mats, ia, fa, n_params, opt: OptimizerConfig):
    """Minimize a coded kernel objective. Returns (params, value)."""
    rng = np.random.default_rng(opt.seed)
    starts = restart_points(rng, opt.restarts, n_params)
    ia = np.asarray(ia, dtype=np.int64)
    fa = np.asarray(fa, dtype=np.float64)
    x, f = kernels.multistart_minimize(
        kind, mats, ia, fa, starts, opt.max_evals, opt.tol
    )
    return x, float(f)


def run_multistart_python(fn, n_params, opt: OptimizerConfig):
    """Same driver for an arbitrary Python objective. Returns (params, value)."""
    rng = np.random.default_rng(opt.seed)
    starts = restart_points(rng, opt.restarts, n_params)
    best_x, best_f = None, np.inf
    for r in range(opt.restarts):
        x, f, _ = nelder_mead(fn, starts[r].copy(), opt.max_evals, opt.tol)
        if f < best_f:
            best_x, best_f = x, f
    return best_x, float(best_f)
