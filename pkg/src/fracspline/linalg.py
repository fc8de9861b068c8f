"""Dense least-squares machinery for the Kronecker-structured systems.

The collocation system is (mass (x) derivative + stiffness (x) value); it is
materialised once (Fortran order, so the factorisation works in place) and
solved by Householder QR with column pivoting.  Column pivoting matters: the
fractional translate tails make trailing columns nearly dependent at high
refinement, and the pivoted factorisation both flags that and survives it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lapack, solve_triangular

__all__ = [
    "LeastSquaresReport",
    "kron_apply",
    "materialize_kron_sum",
    "pivoted_qr",
    "lstsq_solve",
]


@dataclass(frozen=True)
class LeastSquaresReport:
    """Diagnostics of one least-squares solve."""

    residual_norm: float
    condition_estimate: float
    rank: int
    rank_deficient: bool


def kron_apply(m: np.ndarray, a: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Apply ``kron(m, a)`` to ``vec(x)`` without forming the product.

    ``x`` is the coefficient array with rows indexed like ``m``'s columns
    and columns indexed like ``a``'s columns; the result has the same
    row-major vec convention.  Identity: ``kron(m, a) @ x.ravel()
    == (m @ x @ a.T).ravel()``.
    """
    m = np.asarray(m)
    a = np.asarray(a)
    x = np.asarray(x)
    if x.shape != (m.shape[1], a.shape[1]):
        raise ValueError(
            f"coefficient block has shape {x.shape}, expected "
            f"{(m.shape[1], a.shape[1])}"
        )
    return m @ x @ a.T


def materialize_kron_sum(
    m: np.ndarray, a: np.ndarray, l: np.ndarray, g: np.ndarray
) -> np.ndarray:
    """Dense ``kron(m, a) + kron(l, g)``, built block-wise in Fortran order.

    Fortran order lets the LAPACK factorisation overwrite the buffer instead
    of copying it; this matrix is by far the largest allocation of a solve.
    """
    if m.shape != l.shape or a.shape != g.shape:
        raise ValueError("factor shape mismatch")
    nk, nc = m.shape
    npts, nr = a.shape
    out = np.zeros((nk * npts, nc * nr), order="F")
    for k in range(nk):
        rows = slice(k * npts, (k + 1) * npts)
        for i in range(nc):
            out[rows, i * nr : (i + 1) * nr] = m[k, i] * a + l[k, i] * g
    return out


def pivoted_qr(a: np.ndarray):
    """Householder QR with column pivoting; returns (q, r, perm) with
    ``a[:, perm] == q @ r`` (economic sizes)."""
    a = np.asarray(a, dtype=np.float64)
    qr, jpvt, tau, _, info = lapack.dgeqp3(a)
    if info != 0:
        raise RuntimeError(f"dgeqp3 failed with info={info}")
    m, n = a.shape
    k = min(m, n)
    r = np.triu(qr[:k, :])
    q, _, info = lapack.dorgqr(qr[:, :k].copy(order="F"), tau)
    if info != 0:
        raise RuntimeError(f"dorgqr failed with info={info}")
    return q, r, jpvt - 1


def lstsq_solve(
    a: np.ndarray, b: np.ndarray, rcond: float | None = None
) -> tuple[np.ndarray, LeastSquaresReport]:
    """Minimum-residual solve of an overdetermined dense system.

    Rank decisions use the pivoted R diagonal: columns whose diagonal falls
    below ``rcond`` times the leading one are dropped and their coefficients
    set to zero (basic solution).  The returned report carries the residual
    norm, the R-diagonal condition estimate and the rank-deficiency flag.

    ``a`` is overwritten when it is Fortran-contiguous (the intended use:
    feed it the materialised system and let QR work in place).
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64).ravel()
    m, n = a.shape
    if b.shape[0] != m:
        raise ValueError(f"rhs length {b.shape[0]} does not match {m} rows")
    if rcond is None:
        rcond = max(m, n) * np.finfo(np.float64).eps

    overwrite = a.flags.f_contiguous
    # workspace sized for the blocked algorithm (nb = 128); a query call
    # would copy the (large) matrix a second time
    lwork = max(3 * (n + 1), 2 * n + (n + 1) * 128)
    qr, jpvt, tau, _, info = lapack.dgeqp3(a, lwork=lwork, overwrite_a=overwrite)
    if info != 0:
        raise RuntimeError(f"dgeqp3 failed with info={info}")

    diag = np.abs(np.diag(qr[: min(m, n), :]))
    if diag.size == 0 or diag[0] == 0.0:
        rank = 0
    else:
        keep = diag >= rcond * diag[0]
        # diagonal of a pivoted R is non-increasing in exact arithmetic;
        # cut at the first drop below threshold to be safe
        rank = int(np.argmin(keep)) if not keep.all() else diag.size
    if rank == 0:
        x = np.zeros(n)
        report = LeastSquaresReport(
            residual_norm=float(np.linalg.norm(b)),
            condition_estimate=np.inf,
            rank=0,
            rank_deficient=True,
        )
        return x, report

    c = b.reshape(m, 1).copy(order="F")
    # reflector block only: dormqr reads the reflector count off the width
    cq, _, info = lapack.dormqr("L", "T", qr[:, : tau.shape[0]], tau, c, 8192, overwrite_c=1)
    if info != 0:
        raise RuntimeError(f"dormqr failed with info={info}")
    cq = cq[:, 0]

    y = solve_triangular(qr[:rank, :rank], cq[:rank], lower=False)
    xp = np.zeros(n)
    xp[:rank] = y
    x = np.empty(n)
    x[jpvt - 1] = xp  # jpvt is 1-based

    residual = float(np.linalg.norm(cq[rank:])) if m > rank else 0.0
    # full-diagonal spread, not just the kept block: the estimate should keep
    # reporting how unstable the column family is even when rcond cut it
    cond = float(diag[0] / diag[-1]) if diag[-1] > 0 else np.inf
    report = LeastSquaresReport(
        residual_norm=residual,
        condition_estimate=cond,
        rank=rank,
        rank_deficient=rank < n,
    )
    return x, report
