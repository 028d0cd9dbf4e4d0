"""Hot-loop kernels with two interchangeable backends.

The numba backend (default) JIT-compiles the per-step optimizer updates,
smoothing scans and Monte Carlo recurrences; the numpy backend is a pure
numpy/Python fallback. Selection happens once at import time:

* ``TRENDOPT_DISABLE_NUMBA=1`` in the environment forces the numpy backend;
* otherwise numba is used when importable, numpy when not.

Both backends are bit-identical by construction (see ``tests/test_kernels.py``
and ``benchmarks/bench_kernels.py`` for the agreement check and timings).
"""

import os

_FORCE_NUMPY = os.environ.get("TRENDOPT_DISABLE_NUMBA", "").strip().lower() in {
    "1", "true", "yes", "on",
}

if _FORCE_NUMPY:
    from . import numpy_impl as _impl

    BACKEND = "numpy"
else:
    try:
        from . import numba_impl as _impl

        BACKEND = "numba"
    except ImportError:  # numba not installed
        from . import numpy_impl as _impl

        BACKEND = "numpy"

KERNEL_NAMES = (
    "sgd_step",
    "sgdm_step",
    "adagrad_step",
    "rmsprop_step",
    "adam_step",
    "amsgrad_step",
    "tom_step",
    "ses_scan",
    "holt_scan",
    "hw_scan",
    "forecast_paths",
)

sgd_step = _impl.sgd_step
sgdm_step = _impl.sgdm_step
adagrad_step = _impl.adagrad_step
rmsprop_step = _impl.rmsprop_step
adam_step = _impl.adam_step
amsgrad_step = _impl.amsgrad_step
tom_step = _impl.tom_step
ses_scan = _impl.ses_scan
holt_scan = _impl.holt_scan
hw_scan = _impl.hw_scan
forecast_paths = _impl.forecast_paths

__all__ = ["BACKEND", "KERNEL_NAMES", *KERNEL_NAMES]
