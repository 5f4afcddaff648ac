"""Sudden quenches: relaxation of two-point functions, steady states and entropy growth.

The pre-quench ground state is evolved mode by mode with the post-quench
Hamiltonian.  A momentum pair whose quasiparticles are both empty in the
initial state oscillates at the frequency ``eps_k + eps_{-k} = 2 lambda_k``
of the post-quench Hamiltonian; a pair holding one quasiparticle (a Fermi-sea
mode of a gapless initial state) is stationary.  Hence::

    dC(d, t) = (1/N) sum_{k>0, k not in sea} sin 2eta~_k sin 2a_k cos(2 lambda~_k t) cos(k d)

with ``a_k = eta_k - eta~_k``; :func:`delta_correlation_analytic` evaluates
this sum and :func:`delta_correlation` the direct difference
``C(t) - C(inf)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import core
from .entanglement import block_entropy
from .gaussian import (
    OCC_TOL,
    QuenchSetup,
    evolve_state,
    ground_state,
    steady_state,
    two_point,
)
from .numerics import DomainError, FitResult, linear_fit, local_maxima, power_law_fit
from .spincorr import correlation_profile

ENVELOPE_TIMES = (1.0, 1e3, 400)
SATURATION_FRACTION = 0.98


def default_times() -> np.ndarray:
    """Logarithmic grid t in [1, 10^3] with 400 points used for envelope fits."""
    lo, hi, num = ENVELOPE_TIMES
    return np.geomspace(lo, hi, num)


def _check_times(times) -> np.ndarray:
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or len(times) == 0:
        raise DomainError("times must be a non-empty 1-d array")
    if np.any(times < 0) or np.any(np.diff(times) <= 0):
        raise DomainError("times must be non-negative and strictly increasing")
    return times


def _separation(setup: QuenchSetup, m: int, n: int) -> int:
    size = setup.pre.n
    for idx in (m, n):
        if not 1 <= idx <= size:
            raise IndexError(f"site {idx} outside 1..{size}")
    if m == n:
        raise IndexError("m and n must differ")
    return n - m


@dataclass(frozen=True)
class RelaxationSeries:
    times: np.ndarray
    values: np.ndarray
    steady: complex
    m: int = 1
    n: int = 2

    def __post_init__(self):
        if np.any(np.diff(self.times) <= 0):
            raise DomainError("times must be strictly increasing")
        if not np.all(np.isfinite(self.values)):
            raise DomainError("non-finite relaxation values")

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)


@dataclass(frozen=True)
class EntropySeries:
    """Block entropy after a quench.

    ``slope``/``intercept`` describe the linear growth before
    ``saturation_time``; ``a1_plus`` and ``a1_minus`` are the slope multiplied
    by ``|alpha_i + alpha_q|`` and ``|alpha_i - alpha_q|``, i.e. the constant
    a1 each branch of ``S ~ a1 t / |alpha_i +- alpha_q| + a2`` would imply.
    """

    times: np.ndarray
    entropies: np.ndarray
    l: int
    saturation_time: float
    slope: float
    intercept: float
    r2: float
    alpha_i: float
    alpha_q: float

    @property
    def a1_plus(self) -> float:
        return self.slope * abs(self.alpha_i + self.alpha_q)

    @property
    def a1_minus(self) -> float:
        return self.slope * abs(self.alpha_i - self.alpha_q)


def delta_correlation(setup: QuenchSetup, m: int = 1, n: int = 2, times=None) -> RelaxationSeries:
    """``C_mn(t) - C_mn(inf)`` by explicit evolution of the mode blocks."""
    d = _separation(setup, m, n)
    times = default_times() if times is None else _check_times(times)
    init = ground_state(setup.pre)
    steady = complex(two_point(steady_state(setup), [d])[0][0])
    values = np.empty(len(times), dtype=complex)
    for i, t in enumerate(times):
        values[i] = two_point(evolve_state(init, setup.post, t), [d])[0][0] - steady
    return RelaxationSeries(times, values, steady, m, n)


def oscillating_modes(setup: QuenchSetup) -> np.ndarray:
    """Mask of momentum pairs that are empty in the initial state (outside the Fermi sea)."""
    qp = core.spectrum(setup.pre).qp_energies
    return ~np.any(qp < -OCC_TOL, axis=1)


def delta_correlation_analytic(setup: QuenchSetup, m: int = 1, n: int = 2, t=0.0):
    """Closed-form mode sum for ``C_mn(t) - C_mn(inf)``; ``t`` may be an array."""
    d = _separation(setup, m, n)
    post = core.spectrum(setup.post)
    keep = oscillating_modes(setup)
    amp = np.sin(2 * setup.eta_post) * np.sin(2 * setup.dtheta) * np.cos(post.phis * d)
    amp = np.where(keep, amp, 0.0)
    t = np.asarray(t, dtype=float)
    out = np.cos(2 * np.multiply.outer(t, post.lam)) @ amp / setup.pre.n
    return float(out) if out.ndim == 0 else out


def relaxation_exponent(series: RelaxationSeries, t_window: tuple[float, float] | None = None, min_peaks: int = 5) -> FitResult:
    """chi from a power-law fit to the local maxima of |dC| inside ``t_window``.

    The returned ``window`` indexes the peak list used in the fit.
    """
    mag = series.magnitude
    peaks = local_maxima(mag)
    lo, hi = (series.times[0], series.times[-1]) if t_window is None else t_window
    tp = series.times[peaks]
    sel = (tp >= lo) & (tp <= hi) & (mag[peaks] > 0)
    if sel.sum() < min_peaks:
        raise DomainError(f"only {sel.sum()} envelope peaks in window {(lo, hi)}, need {min_peaks}")
    return power_law_fit(tp[sel], mag[peaks][sel])


def steady_profile(setup: QuenchSetup, rmax: int | None = None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(R, I_R(inf), C^xx_R(inf))`` on the dephased steady state."""
    return correlation_profile(steady_state(setup), rmax)


def saturation_time(times, entropies, fraction: float = SATURATION_FRACTION) -> float:
    """First time the entropy reaches ``fraction`` of its late-time median (final 10% of samples)."""
    times = np.asarray(times)
    s = np.asarray(entropies)
    tail = s[-max(1, len(s) // 10):]
    level = fraction * np.median(tail)
    hit = np.flatnonzero(s >= level)
    return float(times[hit[0]])


def entropy_series(setup: QuenchSetup, l: int, times) -> np.ndarray:
    times = _check_times(times)
    if not 1 <= l <= setup.pre.n // 2:
        raise IndexError(f"block size {l} outside 1..{setup.pre.n // 2}")
    init = ground_state(setup.pre)
    return np.array([block_entropy(evolve_state(init, setup.post, t), l) for t in times])


def entropy_growth(setup: QuenchSetup, l: int, times, entropies=None) -> EntropySeries:
    """Block entropy S_t of the first ``l`` sites and its linear growth before saturation.

    The slope is fitted on samples with ``t <= saturation_time``; at least two
    are required.
    """
    times = _check_times(times)
    s = entropy_series(setup, l, times) if entropies is None else np.asarray(entropies, dtype=float)
    t_sat = saturation_time(times, s)
    mask = times <= t_sat
    if mask.sum() >= 2:
        fit = linear_fit(times[mask], s[mask])
    else:
        fit = FitResult(0.0, float(s[0]), 1.0, (0, 1))
    return EntropySeries(
        times, s, l, t_sat, fit.slope, fit.intercept, fit.r2, setup.pre.alpha, setup.post.alpha
    )


@dataclass(frozen=True)
class GrowthScaling:
    """Which branch of ``slope ~ a1 / |alpha_i +- alpha_q|`` describes a set of quenches."""

    branch: str
    a1: float
    r2: float
    spread: float  # max/min of slope * |alpha_i +- alpha_q| over the set


def growth_scaling(series: list[EntropySeries]) -> GrowthScaling:
    """Fit slopes against both ``1/|alpha_i + alpha_q|`` and ``1/|alpha_i - alpha_q|``; keep the better r2.

    The fit is a line through the origin; r2 is computed against the mean.
    """
    if len(series) < 2:
        raise DomainError("need at least two quenches to compare branches")
    slopes = np.array([s.slope for s in series])
    best = None
    for branch, sign in (("+", 1.0), ("-", -1.0)):
        dist = np.array([abs(s.alpha_i + sign * s.alpha_q) for s in series])
        if np.any(dist == 0):
            continue
        x = 1.0 / dist
        a1 = float(x @ slopes / (x @ x))
        ss_res = np.sum((slopes - a1 * x) ** 2)
        ss_tot = np.sum((slopes - slopes.mean()) ** 2)
        r2 = 1.0 if ss_tot == 0 else float(max(0.0, 1 - ss_res / ss_tot))
        prod = slopes * dist
        spread = float(prod.max() / prod.min()) if prod.min() > 0 else np.inf
        cand = GrowthScaling(branch, a1, r2, spread)
        if best is None or cand.r2 > best.r2:
            best = cand
    if best is None:
        raise DomainError("both branches are singular")
    return best
