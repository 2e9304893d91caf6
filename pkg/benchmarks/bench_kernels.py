"""Time the JIT kernel backend against the pure-numpy fallback.

Usage:  python3 benchmarks/bench_kernels.py [--restarts N] [--repeat R]

Runs the same multistart minimizations through both backends and prints
per-solve wall times plus the relative value agreement. The first JIT call
pays the compilation cost; it is reported separately.
"""
import argparse
import time

import numpy as np

from qcorr.kernels import (
    K_COND_ENT,
    K_MI_DROP_KRAUS,
    K_NEG_ENCODE_MI,
    get_backend,
    restart_points,
)
from qcorr.qstate import noisy_family, bell_pair, random_density

CASES = [
    ("conditional entropy (rank-1 readout)", K_COND_ENT, 4,
     np.array([2, 2], dtype=np.int64)),
    ("encoded mutual information", K_NEG_ENCODE_MI, 4,
     np.array([2, 2], dtype=np.int64)),
    ("two-Kraus information drop", K_MI_DROP_KRAUS, 16,
     np.array([2, 2, 2], dtype=np.int64)),
]


def bench_backend(backend, kind, mats, ia, fa, starts, repeat):
    vals = []
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        _, f = backend.multistart_minimize(kind, mats, ia, fa, starts,
                                           2000, 1e-9)
        times.append(time.perf_counter() - t0)
        vals.append(f)
    return min(times), vals[0]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--restarts", type=int, default=20)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    np_backend = get_backend("numpy")
    try:
        nb_backend = get_backend("numba")
    except ImportError:
        nb_backend = None
        print("JIT backend unavailable; timing numpy only")

    rho = noisy_family(bell_pair(), 0.3).entries
    mats = np.stack([rho])
    fa = np.zeros(1)

    if nb_backend is not None:
        t0 = time.perf_counter()
        starts = restart_points(np.random.default_rng(0), 1, 4)
        nb_backend.multistart_minimize(K_COND_ENT, mats,
                                       np.array([2, 2], dtype=np.int64),
                                       fa, starts, 50, 1e-9)
        print(f"jit warmup/compile: {time.perf_counter() - t0:.2f}s")

    print(f"{'case':40s} {'numpy':>10s} {'jit':>10s} {'speedup':>8s}  value gap")
    for label, kind, n_params, ia in CASES:
        starts = restart_points(np.random.default_rng(1), args.restarts,
                                n_params)
        t_np, v_np = bench_backend(np_backend, kind, mats, ia, fa, starts,
                                   args.repeat)
        if nb_backend is None:
            print(f"{label:40s} {t_np * 1e3:8.1f}ms {'-':>10s} {'-':>8s}")
            continue
        t_nb, v_nb = bench_backend(nb_backend, kind, mats, ia, fa, starts,
                                   args.repeat)
        print(f"{label:40s} {t_np * 1e3:8.1f}ms {t_nb * 1e3:8.1f}ms "
              f"{t_np / t_nb:7.1f}x  {abs(v_np - v_nb):.1e}")

    # a larger state exercises the eigensolver-heavy paths
    big = random_density((3, 3), seed=0).entries
    mats = np.stack([big])
    ia = np.array([3, 3], dtype=np.int64)
    starts = restart_points(np.random.default_rng(2), args.restarts, 9)
    t_np, v_np = bench_backend(np_backend, K_COND_ENT, mats, ia, fa, starts,
                               args.repeat)
    if nb_backend is not None:
        t_nb, v_nb = bench_backend(nb_backend, K_COND_ENT, mats, ia, fa,
                                   starts, args.repeat)
        print(f"{'conditional entropy, two qutrits':40s} {t_np * 1e3:8.1f}ms "
              f"{t_nb * 1e3:8.1f}ms {t_np / t_nb:7.1f}x  {abs(v_np - v_nb):.1e}")
    else:
        print(f"{'conditional entropy, two qutrits':40s} {t_np * 1e3:8.1f}ms")


if __name__ == "__main__":
    main()
