"""Fractional-spline collocation / cubic-spline Galerkin solver for the
time-fractional diffusion equation on a space-time cylinder."""

from .bspline import DEFAULT_TAIL_TOL, FractionalBSpline
from .kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TAIL_TOL",
    "FractionalBSpline",
    "KERNEL_BACKEND",
    "__version__",
]
