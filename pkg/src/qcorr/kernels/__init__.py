"""Numeric kernel backends.

The JIT backend is the default. Setting QCORR_JIT=0 (or failing to import
numba) selects the pure-numpy fallback. Both expose the same functions and
are expected to agree to near machine precision; benchmarks/bench_kernels.py
times one against the other.
"""
import os

from . import common  # noqa: F401
from .common import (  # noqa: F401
    EIG_CUTOFF,
    K_COND_ENT,
    K_LOCAL_CH_RESIDUAL,
    K_LOCAL_U_RESIDUAL,
    K_MI_DROP_DEPHASE,
    K_MI_DROP_DEPHASE_R,
    K_MI_DROP_KRAUS,
    K_NEG_ENCODE_MI,
    K_REL_ENT_DEPHASE,
    SUPPORT_LEAK_TOL,
)
from .simplex import nelder_mead, restart_points  # noqa: F401

_flag = os.environ.get("QCORR_JIT", "1").strip().lower()
JIT_REQUESTED = _flag not in ("0", "false", "off", "no")

if JIT_REQUESTED:
    try:
        from . import numba_backend as _backend
    except ImportError:
        from . import numpy_backend as _backend
else:
    from . import numpy_backend as _backend

BACKEND = _backend.NAME

entropy_from_eigvals = _backend.entropy_from_eigvals
vn_entropy = _backend.vn_entropy
reduced_a = _backend.reduced_a
reduced_b = _backend.reduced_b
mutual_information = _backend.mutual_information
relative_entropy = _backend.relative_entropy
trace_distance = _backend.trace_distance
herm_from_params = _backend.herm_from_params
unitary_from_params = _backend.unitary_from_params
isometry_blocks = _backend.isometry_blocks
objective = _backend.objective
multistart_minimize = _backend.multistart_minimize


def get_backend(name):
    """Return a backend module by name ('numba' or 'numpy')."""
    if name == "numpy":
        from . import numpy_backend

        return numpy_backend
    if name == "numba":
        from . import numba_backend

        return numba_backend
    raise ValueError(f"unknown backend {name!r}")
