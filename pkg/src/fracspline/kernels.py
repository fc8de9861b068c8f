"""Backend selection for the evaluation kernels.

Tries the compiled extension first and falls back to NumPy.  Set
``FRACSPLINE_KERNEL=numpy`` or ``FRACSPLINE_KERNEL=cython`` to force a
backend (forcing ``cython`` raises if the extension is not built).
"""

import os

_requested = os.environ.get("FRACSPLINE_KERNEL", "").strip().lower()

if _requested not in ("", "numpy", "cython"):
    raise ImportError(
        f"FRACSPLINE_KERNEL={_requested!r} not understood; use 'numpy' or 'cython'"
    )

if _requested == "numpy":
    from . import _kernels_np as _impl
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[attr-defined]
    except ImportError:
        if _requested == "cython":
            raise ImportError(
                "FRACSPLINE_KERNEL=cython but the compiled kernel is not "
                "available; rebuild with Cython and a C compiler"
            ) from None
        from . import _kernels_np as _impl

BACKEND: str = _impl.BACKEND
truncated_power_sum = _impl.truncated_power_sum
basis_matrix = _impl.basis_matrix

__all__ = ["BACKEND", "truncated_power_sum", "basis_matrix"]
