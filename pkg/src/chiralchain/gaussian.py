"""Fermionic Gaussian states stored as one 2x2 Nambu block per momentum pair.

For Psi_k = (c_k, c_{-k}^dag) the block is ``G_k[i, j] = <Psi_j^dag Psi_i>``::

    G_k = [[<c_k^dag c_k>,           <c_{-k} c_k>        ],
           [<c_k^dag c_{-k}^dag>,    <c_{-k} c_{-k}^dag> ]]

With this index placement the Heisenberg evolution is ``U G U^dag`` and a
stationary state commutes with the Nambu Hamiltonian ``h_k``.  Real-space
two-point functions are Fourier sums over the blocks, so a state of N sites
costs O(N) memory.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import core
from .core import ModelParams

OCC_TOL = 1e-12


@dataclass(frozen=True)
class GaussianState:
    params: ModelParams
    blocks: np.ndarray
    kind: str = "ground"
    t: float | None = None
    phis: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.phis is None:
            object.__setattr__(self, "phis", core.momentum_grid(self.params.n))

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def occupations(self) -> tuple[np.ndarray, np.ndarray]:
        """Mode occupations (<c_k^dag c_k>, <c_{-k}^dag c_{-k}>) for k > 0."""
        return self.blocks[:, 0, 0].real, 1.0 - self.blocks[:, 1, 1].real

    @property
    def anomalous(self) -> np.ndarray:
        """<c_k^dag c_{-k}^dag> for k > 0."""
        return self.blocks[:, 1, 0]


@dataclass(frozen=True)
class QuenchSetup:
    """Sudden change of Hamiltonian from ``pre`` to ``post`` at t = 0.

    ``eta`` and ``eta_post`` are the Bogoliubov angles of both Hamiltonians on
    the shared momentum grid; ``dtheta`` is their difference.
    """

    pre: ModelParams
    post: ModelParams
    eta: np.ndarray = field(init=False, repr=False)
    eta_post: np.ndarray = field(init=False, repr=False)
    dtheta: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.pre.n != self.post.n:
            raise ValueError(f"pre.n={self.pre.n} differs from post.n={self.post.n}")
        eta = core.spectrum(self.pre).theta
        eta_post = core.spectrum(self.post).theta
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "eta_post", eta_post)
        object.__setattr__(self, "dtheta", eta - eta_post)

    @classmethod
    def alpha_quench(cls, base: ModelParams, alpha_i: float, alpha_q: float) -> "QuenchSetup":
        return cls(base.with_(alpha=alpha_i), base.with_(alpha=alpha_q))


def _projectors(theta):
    """Rank-1 projectors onto the +/- eigenvectors of cos(2t) sz + sin(2t) sy."""
    c, s = np.cos(theta), np.sin(theta)
    vp = np.stack([c + 0j, 1j * s], axis=-1)
    vm = np.stack([1j * s, c + 0j], axis=-1)
    pp = vp[:, :, None] * vp.conj()[:, None, :]
    pm = vm[:, :, None] * vm.conj()[:, None, :]
    return pp, pm


def ground_state(params: ModelParams) -> GaussianState:
    """Fill every quasiparticle of energy below -1e-12; exact zeros stay empty."""
    spec = core.spectrum(params)
    occ_plus = spec.eps_plus < -OCC_TOL
    occ_minus = -spec.eps_minus < -OCC_TOL
    pp, pm = _projectors(spec.theta)
    # Phi = (tau_k, tau_{-k}^dag): <Phi^dag Phi> = diag(n_+, 1 - n_-)
    f_plus = occ_plus.astype(float)[:, None, None]
    f_minus = (1.0 - occ_minus.astype(float))[:, None, None]
    blocks = f_plus * pp + f_minus * pm
    return GaussianState(params, blocks, kind="ground", phis=spec.phis)


def _propagators(params: ModelParams, t: float) -> np.ndarray:
    # exp(-i h t) without the identity shift, which only adds a global phase
    spec = core.spectrum(params)
    c, s = np.cos(2 * spec.theta), np.sin(2 * spec.theta)
    lt = spec.lam * t
    cos_, sin_ = np.cos(lt), np.sin(lt)
    u = np.empty((len(spec.phis), 2, 2), dtype=complex)
    # n.sigma = [[c, -i s], [i s, -c]]
    u[:, 0, 0] = cos_ - 1j * sin_ * c
    u[:, 1, 1] = cos_ + 1j * sin_ * c
    u[:, 0, 1] = -1j * sin_ * (-1j * s)
    u[:, 1, 0] = -1j * sin_ * (1j * s)
    return u


def evolve_state(state: GaussianState, post: ModelParams, t: float) -> GaussianState:
    if post.n != state.n:
        raise ValueError("post-quench Hamiltonian acts on a different chain length")
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if t == 0:
        return GaussianState(post, state.blocks.copy(), kind="evolved", t=0.0, phis=state.phis)
    u = _propagators(post, t)
    blocks = u @ state.blocks @ np.conj(np.swapaxes(u, 1, 2))
    return GaussianState(post, blocks, kind="evolved", t=float(t), phis=state.phis)


def evolve(setup: QuenchSetup, t: float) -> GaussianState:
    return evolve_state(ground_state(setup.pre), setup.post, t)


def dephase(state: GaussianState, post: ModelParams) -> GaussianState:
    spec = core.spectrum(post)
    pp, pm = _projectors(spec.theta)
    b = state.blocks
    blocks = pp @ b @ pp + pm @ b @ pm
    return GaussianState(post, blocks, kind="steady", phis=state.phis)


def steady_state(setup: QuenchSetup) -> GaussianState:
    """Infinite-time (diagonal-ensemble) limit of the quench.

    Components of the initial blocks that oscillate in the post-quench
    quasiparticle basis are dropped.
    """
    return dephase(ground_state(setup.pre), setup.post)


def energy(state: GaussianState, params: ModelParams | None = None) -> float:
    """Expectation value of the Hamiltonian ``params`` (default: the state's own)."""
    params = state.params if params is None else params
    spec = core.spectrum(params)
    h = core.bdg_blocks(params, spec)
    const = np.sum(-spec.jk.real + params.d * spec.jk.imag)
    return float(np.real(np.einsum("kij,kji->", h, state.blocks)) + const)


# --- real-space contractions -------------------------------------------------


def two_point(state: GaussianState, ds) -> tuple[np.ndarray, np.ndarray]:
    """Translation-invariant ``C(d) = <c_m^dag c_{m+d}>`` and ``F(d) = <c_m^dag c_{m+d}^dag>``."""
    ds = np.asarray(ds)
    n_plus, n_minus = state.occupations
    p = state.anomalous
    phase = np.exp(1j * np.multiply.outer(ds, state.phis))
    c = (phase @ n_plus + np.conj(phase) @ n_minus) / state.n
    f = 2j * (phase.imag @ p) / state.n
    return c, f


class Contractions:
    """Cached pair contractions of A_i = c_i^dag + c_i and B_i = c_i^dag - c_i.

    Holds ``<A_m A_n>``, ``<B_m B_n>``, ``<A_m B_n>`` and ``<B_m A_n>`` as
    functions of ``d = n - m`` for |d| <= dmax.
    """

    def __init__(self, state: GaussianState, dmax: int):
        if not 0 <= dmax < state.n:
            raise ValueError(f"dmax={dmax} outside [0, {state.n})")
        self.state = state
        self.dmax = dmax
        d = np.arange(-dmax, dmax + 1)
        c, f = two_point(state, d)
        c_rev, f_rev = c[::-1], f[::-1]  # values at -d
        delta = (d == 0).astype(float)
        self.aa = f + c + delta - c_rev + np.conj(f_rev)
        self.bb = f - c - delta + c_rev + np.conj(f_rev)
        self.ab = f - c + delta - c_rev - np.conj(f_rev)
        self.ba = f + c - delta + c_rev - np.conj(f_rev)

    def table(self, kind: str) -> np.ndarray:
        return {"AA": self.aa, "BB": self.bb, "AB": self.ab, "BA": self.ba}[kind]

    def __call__(self, kind: str, d):
        d = np.asarray(d)
        if np.any(np.abs(d) > self.dmax):
            raise IndexError(f"separation beyond cached range {self.dmax}")
        return self.table(kind)[d + self.dmax]


def ab_expectations(state: GaussianState, m: int, n: int) -> tuple[complex, complex, complex]:
    """``(<A_m A_n>, <B_m B_n>, <A_m B_n>)`` for sites 1 <= m, n <= N."""
    for idx in (m, n):
        if not 1 <= idx <= state.n:
            raise IndexError(f"site {idx} outside 1..{state.n}")
    d = n - m
    con = Contractions(state, abs(d))
    return complex(con("AA", d)), complex(con("BB", d)), complex(con("AB", d))


def magnetization_z(state: GaussianState) -> float:
    c0, _ = two_point(state, [0])
    return float(1.0 - 2.0 * c0[0].real)
