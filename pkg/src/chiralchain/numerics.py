"""Numerical kernels: Pfaffians, least-squares fits and kink location."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DomainError(ValueError):
    """Input outside the domain an algorithm is defined on."""


class NumericalConsistencyError(RuntimeError):
    """A result violated a physical or algebraic consistency check."""


def antisymmetric_from_upper(upper) -> np.ndarray:
    """Mirror the strict upper triangle of ``upper`` into an antisymmetric matrix.

    Anything on or below the diagonal of the input is ignored.
    """
    a = np.asarray(upper)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {a.shape}")
    up = np.triu(a, 1)
    return up - up.T


def pfaffian(a, check: bool = True, atol: float = 1e-12) -> complex:
    """Pfaffian of an antisymmetric matrix by Parlett-Reid elimination.

    Each step pivots the largest entry of the current column into the
    sub-diagonal position and eliminates with a rank-2 update, so the cost is
    O(n^3) and only a private copy of ``a`` is touched.

    Parameters
    ----------
    a : array_like, shape (2m, 2m)
        Antisymmetric (not Hermitian) matrix, real or complex.
    check : bool
        Reject input that is not antisymmetric to ``atol`` (relative to its
        largest entry).
    """
    a = np.array(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n % 2:
        raise DomainError(f"Pfaffian needs an even dimension, got {n}")
    if n == 0:
        return 1.0 + 0j
    if check:
        scale = max(np.abs(a).max(), 1.0)
        if np.abs(a + a.T).max() > atol * scale:
            raise DomainError("matrix is not antisymmetric")

    result = 1.0 + 0j
    for k in range(0, n - 1, 2):
        kp = k + 1 + int(np.argmax(np.abs(a[k + 1 :, k])))
        if kp != k + 1:
            a[[k + 1, kp], :] = a[[kp, k + 1], :]
            a[:, [k + 1, kp]] = a[:, [kp, k + 1]]
            result = -result
        pivot = a[k + 1, k]
        if pivot == 0:
            return 0j
        result *= a[k, k + 1]
        if k + 2 < n:
            tau = a[k, k + 2 :] / a[k, k + 1]
            # rank-2 update keeps the trailing block antisymmetric
            upd = np.outer(tau, a[k + 2 :, k + 1])
            a[k + 2 :, k + 2 :] += upd - upd.T
    return complex(result)


@dataclass(frozen=True)
class FitResult:
    """Least-squares line fit.

    For power-law fits ``slope`` holds the decay exponent (the negated
    log-log slope) and ``intercept`` the prefactor.
    """

    slope: float
    intercept: float
    r2: float
    window: tuple[int, int]

    @property
    def exponent(self) -> float:
        return self.slope


def _windowed(xs, ys, window):
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise DomainError("xs and ys must be 1-d arrays of equal length")
    lo, hi = (0, len(xs)) if window is None else window
    if not 0 <= lo < hi <= len(xs):
        raise DomainError(f"window {window} out of range for {len(xs)} points")
    return xs[lo:hi], ys[lo:hi], (lo, hi)


def _ols(x, y):
    xm, ym = x.mean(), y.mean()
    sxx = np.sum((x - xm) ** 2)
    if sxx <= 1e-300 * max(1.0, np.abs(x).max() ** 2) or len(x) < 2:
        raise DomainError("x values are degenerate")
    slope = np.sum((x - xm) * (y - ym)) / sxx
    intercept = ym - slope * xm
    ss_res = np.sum((y - (slope * x + intercept)) ** 2)
    ss_tot = np.sum((y - ym) ** 2)
    if ss_tot == 0.0:
        r2 = 1.0
    else:
        r2 = float(np.clip(1.0 - ss_res / ss_tot, 0.0, 1.0))
    return float(slope), float(intercept), r2


def linear_fit(xs, ys, window=None) -> FitResult:
    """Ordinary least squares ``y = slope * x + intercept`` on ``xs[lo:hi]``."""
    x, y, win = _windowed(xs, ys, window)
    if len(x) < 2:
        raise DomainError("linear fit needs at least 2 points")
    slope, intercept, r2 = _ols(x, y)
    return FitResult(slope, intercept, r2, win)


def power_law_fit(xs, ys, window=None) -> FitResult:
    """Fit ``y = A * x**(-exponent)`` by least squares in log-log space."""
    x, y, win = _windowed(xs, ys, window)
    if len(x) < 3:
        raise DomainError("power-law fit needs at least 3 points")
    if np.any(x <= 0) or np.any(y <= 0):
        raise DomainError("power-law fit needs strictly positive data")
    slope, intercept, r2 = _ols(np.log(x), np.log(y))
    return FitResult(-slope, float(np.exp(intercept)), r2, win)


def second_difference(xs, ys) -> np.ndarray:
    """Three-point second derivative at the interior points of a (possibly non-uniform) grid."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    h0 = x[1:-1] - x[:-2]
    h1 = x[2:] - x[1:-1]
    return 2.0 * (h0 * y[2:] - (h0 + h1) * y[1:-1] + h1 * y[:-2]) / (h0 * h1 * (h0 + h1))


def kink_detect(xs, ys) -> float:
    """Abscissa of the largest |second difference| of ``ys`` (interior points only)."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.ndim != 1 or x.shape != y.shape:
        raise DomainError("xs and ys must be 1-d arrays of equal length")
    if len(x) < 5:
        raise DomainError("kink detection needs at least 5 points")
    dx = np.diff(x)
    if not (np.all(dx > 0) or np.all(dx < 0)):
        raise DomainError("xs must be strictly monotone")
    d2 = np.abs(second_difference(x, y))
    return float(x[1 + int(np.argmax(d2))])


def local_maxima(ys) -> np.ndarray:
    """Indices of three-point local maxima; a flat top reports its first point."""
    y = np.asarray(ys)
    mid = y[1:-1]
    return 1 + np.flatnonzero((mid > y[:-2]) & (mid >= y[2:]))


def entropy_bits(eigenvalues, clip: float = 1e-8) -> float:
    """von Neumann entropy (base 2) of a spectrum; roundoff negativity down to ``-clip`` is zeroed."""
    p = np.real(np.asarray(eigenvalues))
    if np.any(p < -clip):
        raise NumericalConsistencyError(f"negative eigenvalue {p.min():.3e} below -{clip}")
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))
