"""Hot-kernel backend selection.

The compiled Cython extension is preferred; the pure-numpy fallback is used
when the extension is missing or ``FRAUDBENCH_KERNELS=python`` is set.
``BACKEND`` names the active implementation.  Both backends are deterministic;
a given install always selects the same one, which is what the report
byte-reproducibility guarantee relies on.
"""

import os

from fraudbench._kernels import _pykernels

if os.environ.get("FRAUDBENCH_KERNELS", "").lower() == "python":
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from fraudbench._kernels import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

jacobi_orthogonalize = _impl.jacobi_orthogonalize
best_split_gini = _impl.best_split_gini
best_split_sse = _impl.best_split_sse
linear_epoch = _impl.linear_epoch

__all__ = [
    "BACKEND",
    "jacobi_orthogonalize",
    "best_split_gini",
    "best_split_sse",
    "linear_epoch",
]
