"""Block entanglement entropy and effective central charge."""

from __future__ import annotations

import numpy as np

from .core import ModelParams
from .gaussian import GaussianState, ground_state, two_point
from .numerics import DomainError, FitResult, linear_fit, entropy_bits


def block_correlation_matrix(state: GaussianState, l: int) -> np.ndarray:
    """2l x 2l matrix <Psi_a Psi_b^dag> for Psi = (c_1..c_l, c_1^dag..c_l^dag).

    In blocks this is ``[[1 - C^T, F^dag], [F, C]]`` with
    ``C_mn = <c_m^dag c_n>`` and ``F_mn = <c_m^dag c_n^dag>``; with real
    hopping it reduces to the familiar ``[[1 - C, F], [F^dag, C]]`` layout up
    to a unitary that leaves the spectrum unchanged.
    """
    if not 1 <= l <= state.n // 2:
        raise IndexError(f"block size {l} outside 1..{state.n // 2}")
    d = np.arange(-(l - 1), l)
    c_d, f_d = two_point(state, d)
    idx = np.arange(l)
    sep = idx[None, :] - idx[:, None] + (l - 1)
    c = c_d[sep]
    f = f_d[sep]
    top = np.hstack([np.eye(l) - c.T, f.conj().T])
    bottom = np.hstack([f, c])
    return np.vstack([top, bottom])


def block_spectrum(state: GaussianState, l: int) -> np.ndarray:
    return np.linalg.eigvalsh(block_correlation_matrix(state, l))


def block_entropy(state: GaussianState, l: int) -> float:
    """von Neumann entropy (bits) of the first l sites."""
    return entropy_bits(np.clip(block_spectrum(state, l), None, 1.0))


def entropy_profile(state: GaussianState, ls) -> np.ndarray:
    return np.array([block_entropy(state, int(l)) for l in ls])


def chord_log(n: int, ls) -> np.ndarray:
    """(1/3) log2[(N / pi) sin(pi l / N)], the regressor of the central-charge fit."""
    ls = np.asarray(ls, dtype=float)
    return np.log2(n / np.pi * np.sin(np.pi * ls / n)) / 3.0


def default_l_range(n: int) -> tuple[int, int]:
    return 8, n // 4


def central_charge_from_entropies(n: int, ls, entropies) -> FitResult:
    return linear_fit(chord_log(n, ls), entropies)


def central_charge_fit(params: ModelParams, l_range: tuple[int, int] | None = None, state: GaussianState | None = None) -> FitResult:
    """Fit S_l = c_eff * (1/3) log2[(N/pi) sin(pi l/N)] + a over l in ``l_range`` (inclusive).

    ``slope`` is c_eff and ``intercept`` is a.
    """
    lo, hi = default_l_range(params.n) if l_range is None else l_range
    if lo < 2 or hi > params.n // 2 or hi - lo + 1 < 5:
        raise DomainError(f"l_range {(lo, hi)} must lie in [2, N/2] with at least 5 points")
    state = ground_state(params) if state is None else state
    ls = np.arange(lo, hi + 1)
    fit = central_charge_from_entropies(params.n, ls, entropy_profile(state, ls))
    return FitResult(fit.slope, fit.intercept, fit.r2, (lo, hi))
