"""Backend selection for the hot kernels.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
numpy implementations in ``_pykernels`` are used. Setting the environment
variable ``CORRSTRESS_BACKEND=python`` forces the fallback at import time,
and :func:`set_backend` switches at runtime (the benchmark uses this).

Callers must look functions up through this module (``kernels.det(...)``)
so that a backend switch takes effect.
"""
import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

COMPILED_AVAILABLE = _ckernels is not None

# above these sizes LAPACK beats the O(n^3)-per-sweep Jacobi kernels
# (crossovers measured with benchmarks/bench_kernels.py)
JACOBI_MAX_N = {"sym_eigvalsh": 6, "whitened_log_sq": 10}

BACKEND = None


def _jacobi_or_lapack(compiled, fallback):
    limit = JACOBI_MAX_N[compiled.__name__]

    def dispatch(*arrays):
        if arrays[0].shape[0] <= limit:
            return compiled(*arrays)
        return fallback(*arrays)
    dispatch.__name__ = compiled.__name__
    dispatch.__doc__ = compiled.__doc__
    return dispatch


def set_backend(name):
    """Select ``"compiled"`` or ``"python"`` kernels; returns the previous name."""
    global BACKEND, det, sym_eigvalsh, whitened_log_sq
    if name not in ("compiled", "python"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "compiled" and not COMPILED_AVAILABLE:
        raise RuntimeError("compiled kernels are not available; build the extension")
    previous = BACKEND
    if name == "compiled":
        det = _ckernels.det
        sym_eigvalsh = _jacobi_or_lapack(_ckernels.sym_eigvalsh, _pykernels.sym_eigvalsh)
        whitened_log_sq = _jacobi_or_lapack(
            _ckernels.whitened_log_sq, _pykernels.whitened_log_sq
        )
    else:
        det = _pykernels.det
        sym_eigvalsh = _pykernels.sym_eigvalsh
        whitened_log_sq = _pykernels.whitened_log_sq
    BACKEND = name
    return previous


det = sym_eigvalsh = whitened_log_sq = None

if COMPILED_AVAILABLE and os.environ.get("CORRSTRESS_BACKEND", "").lower() != "python":
    set_backend("compiled")
else:
    set_backend("python")
