"""Kernel backend selection.

``MEANSWITCH_BACKEND=numpy`` forces the pure-numpy kernels,
``MEANSWITCH_BACKEND=numba`` requires numba, and the default (``auto``)
uses numba when it is importable and falls back to numpy otherwise.
Modules access the kernels through the ``kernels`` attribute of this
module so the active backend can be swapped for benchmarks and tests.
"""

import os

_requested = os.environ.get("MEANSWITCH_BACKEND", "auto").strip().lower()

if _requested in ("numpy", "np"):
    from . import _kernels_numpy as kernels

    BACKEND = "numpy"
elif _requested == "numba":
    from . import _kernels_numba as kernels

    BACKEND = "numba"
elif _requested == "auto":
    try:
        from . import _kernels_numba as kernels

        BACKEND = "numba"
    except ImportError:
        from . import _kernels_numpy as kernels

        BACKEND = "numpy"
else:
    raise RuntimeError(
        "MEANSWITCH_BACKEND must be 'auto', 'numba' or 'numpy', "
        f"got {_requested!r}"
    )


def backend_name() -> str:
    """Name of the kernel backend in use: 'numba' or 'numpy'."""
    return BACKEND
