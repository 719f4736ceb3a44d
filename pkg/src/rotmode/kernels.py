"""Backend selection for the hot kernels.

The compiled extension is preferred. Set ``ROTMODE_PURE_PYTHON=1`` to force
the NumPy fallback (``BACKEND`` reports which one is active).
"""

import os

from . import _kernels_py

if os.environ.get("ROTMODE_PURE_PYTHON", "").strip() not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels_cy as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "cython" if _impl is not _kernels_py else "python"

trig_kernels = _impl.trig_kernels
propagator_grid = _impl.propagator_grid
rk4_grid = _impl.rk4_grid


def available_backends():
    """Map of backend name to kernel module, for benchmarks and equivalence tests."""
    backends = {"python": _kernels_py}
    try:
        from . import _kernels_cy
    except ImportError:
        pass
    else:
        backends["cython"] = _kernels_cy
    return backends
