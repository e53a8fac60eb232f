"""Backend selection for the numeric kernels.

The compiled extension is used when it imports; setting the environment
variable ``FDESOLVE_PURE_PYTHON=1`` forces the pure-Python implementations.
``BACKEND`` names the active one.
"""

import os

from . import _pykernels

if os.environ.get("FDESOLVE_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels
        BACKEND = "python"

ml_sum = _impl.ml_sum
ml_sum_dd = _impl.ml_sum_dd
ml_array = _impl.ml_array
# numpy-vectorised in both backends
ml_array_dd = _pykernels.ml_array_dd
pi_convolve = _impl.pi_convolve

__all__ = ["BACKEND", "ml_sum", "ml_sum_dd", "ml_array", "ml_array_dd", "pi_convolve"]
