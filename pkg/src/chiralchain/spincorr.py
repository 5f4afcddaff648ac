"""Spin correlators, two-site density matrices and mutual information.

Through the Jordan-Wigner strings every two-point spin correlator is the
expectation of an ordered product of 2R Majorana-type operators
A_i = c_i^dag + c_i and B_i = c_i^dag - c_i::

    s^x_i s^x_{i+R} =      B_i (A_{i+1} B_{i+1}) ... (A_{i+R-1} B_{i+R-1}) A_{i+R}
    s^y_i s^y_{i+R} = -    A_i (A B) ... (A B) B_{i+R}
    s^x_i s^y_{i+R} =  i   B_i (A B) ... (A B) B_{i+R}
    s^y_i s^x_{i+R} =  i   A_i (A B) ... (A B) A_{i+R}

Wick's theorem turns each product into the Pfaffian of the 2R x 2R
antisymmetric matrix of pair contractions <A A>, <B B>, <A B>.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gaussian import Contractions, GaussianState, magnetization_z
from .numerics import (
    FitResult,
    NumericalConsistencyError,
    entropy_bits,
    local_maxima,
    pfaffian,
    power_law_fit,
)

IMAG_TOL = 1e-6
PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}
MIN_ENVELOPE_PEAKS = 3

_ENDS = {
    # (first operator, last operator, prefactor)
    "xx": ("B", "A", 1.0),
    "yy": ("A", "B", -1.0),
    "xy": ("B", "B", 1j),
    "yx": ("A", "A", 1j),
}


def _check_r(state: GaussianState, r: int):
    if not 1 <= r <= state.n // 2:
        raise IndexError(f"R={r} outside 1..{state.n // 2}")


def _operator_string(first: str, last: str, r: int):
    kinds = [first]
    sites = [0]
    for j in range(1, r):
        kinds += ["A", "B"]
        sites += [j, j]
    kinds.append(last)
    sites.append(r)
    return kinds, np.array(sites)


def wick_matrix(con: Contractions, kinds, sites) -> np.ndarray:
    """Antisymmetric matrix M[a, b] = <O_a O_b> (a < b) of an operator string."""
    m = len(kinds)
    out = np.zeros((m, m), dtype=complex)
    kinds = np.array(kinds)
    for ka in "AB":
        for kb in "AB":
            rows = np.flatnonzero(kinds == ka)
            cols = np.flatnonzero(kinds == kb)
            d = sites[cols][None, :] - sites[rows][:, None]
            out[np.ix_(rows, cols)] = con(ka + kb, d)
    up = np.triu(out, 1)
    return up - up.T


def _real(value: complex, what: str) -> float:
    if abs(value.imag) > IMAG_TOL:
        raise NumericalConsistencyError(f"{what} has imaginary part {value.imag:.3e}")
    return float(value.real)


def spin_correlator(state: GaussianState, a: str, b: str, r: int, con: Contractions | None = None) -> float:
    """<sigma^a_i sigma^b_{i+R}> for a, b in {x, y}."""
    _check_r(state, r)
    key = a + b
    if key not in _ENDS:
        raise ValueError(f"unsupported component pair {key!r}")
    con = Contractions(state, r) if con is None or con.dmax < r else con
    first, last, pref = _ENDS[key]
    kinds, sites = _operator_string(first, last, r)
    value = pref * pfaffian(wick_matrix(con, kinds, sites), check=False)
    return _real(value, f"C^{key}_{r}")


def czz_correlator(state: GaussianState, r: int, con: Contractions | None = None) -> float:
    _check_r(state, r)
    con = Contractions(state, r) if con is None or con.dmax < r else con
    kinds = ["A", "B", "A", "B"]
    sites = np.array([0, 0, r, r])
    return _real(pfaffian(wick_matrix(con, kinds, sites), check=False), f"C^zz_{r}")


def czz_closed_form(state: GaussianState, r: int) -> float:
    """Expanded 4-operator Wick sum, used to cross-check :func:`czz_correlator`."""
    con = Contractions(state, r)
    mz = con("AB", 0)
    value = mz * mz - con("AA", r) * con("BB", r) + con("AB", r) * con("BA", r)
    return _real(complex(value), f"C^zz_{r}")


def chiral_order(state: GaussianState) -> float:
    """Spin current (C^xy_1 - C^yx_1) / 4 between neighbouring sites."""
    con = Contractions(state, 1)
    # R = 1 strings are single contractions: C^xy_1 = i<B B>, C^yx_1 = i<A A>
    value = 0.25 * 1j * (con("BB", 1) - con("AA", 1))
    return _real(complex(value), "chiral order")


def fm_order(state: GaussianState) -> float:
    return spin_correlator(state, "x", "x", state.n // 2)


@dataclass(frozen=True)
class SpinObservables:
    mz: float
    cxx: np.ndarray
    cyy: np.ndarray
    czz: np.ndarray
    cxy: np.ndarray
    cyx: np.ndarray

    @property
    def distances(self) -> np.ndarray:
        return np.arange(1, len(self.cxx) + 1)

    def corr(self, key: str, r: int) -> float:
        return float(getattr(self, "c" + key)[r - 1])


def spin_observables(state: GaussianState, rmax: int | None = None, components=("xx", "yy", "zz", "xy", "yx")) -> SpinObservables:
    """Correlators for R = 1..rmax (default N/2); skipped components are NaN."""
    rmax = state.n // 2 if rmax is None else rmax
    _check_r(state, rmax)
    con = Contractions(state, rmax)
    out = {k: np.full(rmax, np.nan) for k in ("xx", "yy", "zz", "xy", "yx")}
    for r in range(1, rmax + 1):
        for key in components:
            if key == "zz":
                out[key][r - 1] = czz_correlator(state, r, con)
            else:
                out[key][r - 1] = spin_correlator(state, key[0], key[1], r, con)
    return SpinObservables(magnetization_z(state), *(out[k] for k in ("xx", "yy", "zz", "xy", "yx")))


def density_from_correlators(mz: float, corr: dict) -> np.ndarray:
    """rho = (1 + mz (Z1 + Z2) + sum_kl C^kl s^k s^l) / 4 with x/y-z cross terms zero."""
    eye = np.eye(2)
    rho = np.eye(4, dtype=complex) + mz * (np.kron(PAULI["z"], eye) + np.kron(eye, PAULI["z"]))
    for key, value in corr.items():
        rho = rho + value * np.kron(PAULI[key[0]], PAULI[key[1]])
    return rho / 4


def two_site_density(state: GaussianState, r: int, con: Contractions | None = None) -> np.ndarray:
    _check_r(state, r)
    con = Contractions(state, r) if con is None or con.dmax < r else con
    mz = float(con("AB", 0).real)
    corr = {k: spin_correlator(state, k[0], k[1], r, con) for k in ("xx", "yy", "xy", "yx")}
    corr["zz"] = czz_correlator(state, r, con)
    rho = density_from_correlators(mz, corr)
    evals = np.linalg.eigvalsh(rho)
    if evals.min() < -1e-6:
        raise NumericalConsistencyError(f"two-site density has eigenvalue {evals.min():.3e}")
    return rho


def single_site_entropy(mz: float) -> float:
    return entropy_bits([(1 + mz) / 2, (1 - mz) / 2])


def mutual_information_from_rho(rho: np.ndarray, mz: float) -> float:
    s_pair = entropy_bits(np.linalg.eigvalsh(rho))
    return 2 * single_site_entropy(mz) - s_pair


def mutual_information(state: GaussianState, r: int, con: Contractions | None = None) -> float:
    """I_R = S(rho_i) + S(rho_{i+R}) - S(rho_{i,i+R}) in bits."""
    rho = two_site_density(state, r, con)
    mz = float(np.real(rho[0, 0] - rho[3, 3]))
    return mutual_information_from_rho(rho, mz)


def correlation_profile(state: GaussianState, rmax: int | None = None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(R, I_R, C^xx_R)`` for R = 1..rmax, default N/2."""
    rmax = state.n // 2 if rmax is None else rmax
    obs = spin_observables(state, rmax)
    mi = np.empty(rmax)
    for r in range(1, rmax + 1):
        corr = {k: obs.corr(k, r) for k in ("xx", "yy", "zz", "xy", "yx")}
        rho = density_from_correlators(obs.mz, corr)
        if np.linalg.eigvalsh(rho).min() < -1e-6:
            raise NumericalConsistencyError(f"two-site density at R={r} is not positive")
        mi[r - 1] = mutual_information_from_rho(rho, obs.mz)
    return obs.distances, mi, obs.cxx


def default_window(n: int) -> tuple[int, int]:
    """Index window covering R in [4, N/8] of an array indexed by R - 1."""
    return 3, n // 8


def decay_exponent(distances, values, window=None, n: int | None = None) -> FitResult:
    """Power-law decay exponent of |values| against R.

    ``window`` indexes ``distances``; by default R in [4, N/8].  When the
    values change sign inside the window and |values| has at least
    ``MIN_ENVELOPE_PEAKS`` local maxima there, only those maxima (the
    envelope) are fitted; otherwise every point is.  The returned window
    always refers to ``distances``.
    """
    distances = np.asarray(distances, dtype=float)
    values = np.asarray(values, dtype=float)
    if window is None:
        n = 2 * len(distances) if n is None else n
        window = default_window(n)
    lo, hi = window
    seg = values[lo:hi]
    mag = np.abs(seg)
    if np.any(np.sign(seg[1:]) * np.sign(seg[:-1]) < 0):
        peaks = local_maxima(mag)
        if len(peaks) >= MIN_ENVELOPE_PEAKS:
            fit = power_law_fit(distances[lo:hi][peaks], mag[peaks])
            return FitResult(fit.slope, fit.intercept, fit.r2, (lo, hi))
    return power_law_fit(distances, np.abs(values), window)
