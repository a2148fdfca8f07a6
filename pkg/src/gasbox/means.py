"""Two-point face averages: arithmetic, logarithmic and geometric means.

All functions accept scalars or numpy arrays of matching shape (the two
arguments are the values on either side of a face) and broadcast like
ufuncs.  The logarithmic mean uses a series expansion near equal
arguments to avoid the 0/0 cancellation in (b - a) / (log b - log a).
"""

import numpy as np

__all__ = [
    "arith_mean",
    "log_mean",
    "geo_mean",
    "split_average_residual",
]

# Switch to the series branch when zeta^2 < _SERIES_CUTOFF, with
# zeta = (b - a)/(b + a).  A four-term expansion then carries a relative
# truncation error below 1e-16 (next term is zeta^8/9 < 1e-17).
_SERIES_CUTOFF = 1.0e-4


def arith_mean(a, b):
    """Arithmetic mean (a + b) / 2."""
    return 0.5 * (np.asarray(a, dtype=float) + np.asarray(b, dtype=float))


def log_mean(a, b):
    """Logarithmic mean (b - a) / (log b - log a), equal to a when a == b.

    Both arguments must be positive.  Near a == b the direct quotient
    loses all significant digits, so for zeta^2 = ((b-a)/(b+a))^2 below
    1e-4 the value is computed from

        (a + b) / (2 + 2 z/3 + 2 z^2/5 + 2 z^3/7),   z = zeta^2,

    which is the expansion of the exact quotient in zeta.  The result is
    bitwise symmetric in (a, b) on both branches.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(a <= 0.0) or np.any(b <= 0.0):
        raise ValueError("log_mean requires strictly positive arguments")

    zeta = (b - a) / (b + a)
    z = zeta * zeta
    series = (a + b) / (2.0 + z * (2.0 / 3.0 + z * (2.0 / 5.0 + z * (2.0 / 7.0))))

    # log(b) - log(a) rather than log(b/a): the difference of the two
    # rounded logs negates exactly under argument swap.
    dlog = np.log(b) - np.log(a)
    safe = np.where(dlog == 0.0, 1.0, dlog)
    direct = (b - a) / safe

    out = np.where(z < _SERIES_CUTOFF, series, direct)
    out = np.where(a == b, a, out)
    if out.ndim == 0:
        return float(out)
    return out


def geo_mean(a, b):
    """Geometric mean sqrt(a * b); accepts zero, rejects negative input."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(a < 0.0) or np.any(b < 0.0):
        raise ValueError("geo_mean requires nonnegative arguments")
    out = np.sqrt(a * b)
    if out.ndim == 0:
        return float(out)
    return out


def split_average_residual(a_pair, b_pair):
    """Defect of the product-average splitting identity.

    For nodal pairs a = (aL, aR), b = (bL, bR) the identity

        mean(a*b) = mean(a)*mean(b) + (aR - aL)*(bR - bL) / 4

    holds algebraically; the return value |lhs - rhs| measures only
    floating-point rounding.
    """
    a_l, a_r = (np.asarray(x, dtype=float) for x in a_pair)
    b_l, b_r = (np.asarray(x, dtype=float) for x in b_pair)
    lhs = 0.5 * (a_l * b_l + a_r * b_r)
    rhs = arith_mean(a_l, a_r) * arith_mean(b_l, b_r) + 0.25 * (a_r - a_l) * (b_r - b_l)
    out = np.abs(lhs - rhs)
    if out.ndim == 0:
        return float(out)
    return out
