"""Scalar special functions used by the spline machinery.

Self-contained on purpose: the gamma function is the one knob the whole
construction turns on (normalisation of every truncated power), so it is
implemented here once, with known accuracy, instead of being picked up from
whatever libm happens to provide.
"""

import cmath
import math

__all__ = [
    "PoleError",
    "ConvergenceError",
    "gamma",
    "gen_binomial",
    "kummer_1f1",
]


class PoleError(ValueError):
    """Evaluation requested at a pole of the function."""


class ConvergenceError(RuntimeError):
    """A series did not reach the requested tolerance within the term cap."""


# Lanczos approximation, g = 7, 9 coefficients.  Relative error below
# 1e-13 on the reflection-reduced domain, which is ample for the
# double-precision pipeline built on top.
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma(x: float) -> float:
    """Euler gamma function of a real argument.

    Raises
    ------
    PoleError
        If ``x`` is zero or a negative integer.
    """
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"gamma argument must be finite, got {x!r}")
    if x <= 0.0 and x == math.floor(x):
        raise PoleError(f"gamma pole at non-positive integer {x!r}")
    if x < 0.5:
        # reflection: gamma(x) gamma(1-x) = pi / sin(pi x)
        return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))
    z = x - 1.0
    acc = _LANCZOS_C[0]
    for i in range(1, len(_LANCZOS_C)):
        acc += _LANCZOS_C[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * acc


def gen_binomial(alpha: float, k: int) -> float:
    """Generalised binomial coefficient ``alpha choose k``.

    Computed by the multiplicative recurrence
    ``C(alpha, k) = C(alpha, k-1) * (alpha - k + 1) / k`` so that no gamma
    evaluation near a pole is involved; for integer ``alpha`` the product
    hits an exact zero factor once ``k > alpha`` instead of a 0/0.
    """
    if k < 0:
        raise ValueError(f"binomial order must be non-negative, got {k}")
    acc = 1.0
    for i in range(1, k + 1):
        acc *= (alpha - i + 1) / i
    return acc


def kummer_1f1(
    a: float,
    b: float,
    z: complex,
    *,
    rel_tol: float = 1e-14,
    max_terms: int = 500,
    max_abs_z: float = 50.0,
) -> complex:
    """Confluent hypergeometric function 1F1(a; b; z) by its power series.

    The series is fine for the moderate arguments this package needs
    (|z| <= pi * T in practice); ``max_abs_z`` guards against silent
    cancellation blow-up outside that regime.

    Raises
    ------
    PoleError
        If ``b`` is zero or a negative integer.
    ConvergenceError
        If the term ratio has not dropped below ``rel_tol`` after
        ``max_terms`` terms.
    ValueError
        If ``|z| > max_abs_z``.
    """
    if b <= 0.0 and float(b) == math.floor(b):
        raise PoleError(f"1F1 undefined for non-positive integer b = {b!r}")
    z = complex(z)
    if abs(z) > max_abs_z:
        raise ValueError(f"|z| = {abs(z):g} exceeds the series guard {max_abs_z:g}")
    total = term = complex(1.0)
    for k in range(max_terms):
        term *= (a + k) / (b + k) * z / (k + 1)
        total += term
        if abs(term) <= rel_tol * abs(total):
            if not (cmath.isfinite(total)):
                raise ConvergenceError("1F1 series produced a non-finite value")
            return total
    raise ConvergenceError(
        f"1F1 series did not converge in {max_terms} terms for a={a}, b={b}, z={z}"
    )
