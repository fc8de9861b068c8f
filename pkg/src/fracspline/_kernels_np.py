"""NumPy reference implementation of the evaluation kernels.

This is the portable backend: plain vectorised loops over the truncated-power
terms.  ``fracspline.kernels`` re-exports either this module or the compiled
one, so everything here has to match ``_kernels_cy`` bit-for-bit in exact
arithmetic and to a few ulp in floating point.
"""

import numpy as np

BACKEND = "numpy"


def truncated_power_sum(u, weights, expo, cutoff):
    """Evaluate ``sum_k weights[k] * (u - k)_+**expo`` pointwise.

    Parameters
    ----------
    u : ndarray, shape (n,)
        Evaluation arguments.
    weights : ndarray, shape (K,)
        Term weights; the sum runs over all k with ``u - k > 0`` (``>= 0``
        when ``expo == 0``, so the zeroth power is right-continuous at the
        knot).
    expo : float
        Common exponent of the truncated powers.  May be negative but must
        stay above -1/2.
    cutoff : float
        Arguments ``u > cutoff`` evaluate to exactly 0.  Pass ``np.inf`` to
        disable truncation.

    Returns
    -------
    ndarray, shape (n,)
    """
    u = np.ascontiguousarray(u, dtype=np.float64)
    w = np.ascontiguousarray(weights, dtype=np.float64)
    out = np.zeros_like(u)
    if expo == 0.0:
        for k in range(w.shape[0]):
            out[u - k >= 0.0] += w[k]
    else:
        for k in range(w.shape[0]):
            v = u - k
            m = v > 0.0
            out[m] += w[k] * v[m] ** expo
    out[u > cutoff] = 0.0
    return out


def basis_matrix(t, scale, shift0, n_cols, weights, expo, cutoff):
    """Tabulate dilated translates of one truncated-power sum.

    ``out[i, c] = truncated_power_sum(scale * t[i] - (shift0 + c))`` for
    ``c = 0 .. n_cols-1``.  This is the shape shared by every collocation /
    evaluation matrix fill, so both backends expose it as one call.
    """
    t = np.ascontiguousarray(t, dtype=np.float64)
    out = np.empty((t.shape[0], n_cols), dtype=np.float64)
    for c in range(n_cols):
        out[:, c] = truncated_power_sum(scale * t - (shift0 + c), weights, expo, cutoff)
    return out
