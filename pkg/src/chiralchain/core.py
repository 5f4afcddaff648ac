"""Momentum-space description of the long-range XY chain with DM interaction.

Fermionized (Jordan-Wigner, ``sigma^z = 1 - 2 c^dag c``), Fourier transformed
with ``c_n = N^{-1/2} sum_k exp(i phi_k n) c_k`` and restricted to the
antiperiodic sector, the Hamiltonian splits into independent 2x2 blocks

    H = sum_{k>0} Psi_k^dag h_k Psi_k + const,     Psi_k = (c_k, c_{-k}^dag)

with

    h_k = -D Im(J_k) * 1 + [[h - Re J_k, -i g Im J_k], [i g Im J_k, -(h - Re J_k)]]

The DM coupling only shifts each block by a multiple of the identity, so it
changes energies but never the Bogoliubov rotation.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

GAPLESS_RTOL = 1e-9


@dataclass(frozen=True)
class ModelParams:
    """One instance of the chain.

    ``d`` and ``h`` are measured in units of the exchange ``J``.
    """

    gamma: float
    d: float
    h: float
    alpha: float
    n: int = 512
    kac_normalize: bool = True

    def __post_init__(self):
        for name in ("gamma", "d", "h", "alpha"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if int(self.n) != self.n or self.n < 4 or self.n % 2:
            raise ValueError(f"n must be an even integer >= 4, got {self.n!r}")
        if self.alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha!r}")
        object.__setattr__(self, "n", int(self.n))

    def with_(self, **changes) -> "ModelParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class MomentumGrid:
    phis: np.ndarray

    @classmethod
    def for_size(cls, n: int) -> "MomentumGrid":
        k = np.arange(1, n // 2 + 1)
        return cls(np.pi * (2 * k - 1) / n)

    def __len__(self):
        return len(self.phis)


@dataclass(frozen=True)
class ModeCoefficients:
    """Spectral data of one momentum pair (k, -k).

    ``eps_plus``/``eps_minus`` are the two eigenvalues ``-D Im J +/- lam`` of
    the Nambu block.  The quasiparticle energies are ``eps_plus`` (mode k) and
    ``-eps_minus`` (mode -k).
    """

    phi: float
    jk: complex
    lam: float
    theta: float
    eps_plus: float
    eps_minus: float
    u: complex
    v: complex


def momentum_grid(n: int) -> np.ndarray:
    return MomentumGrid.for_size(n).phis


def kac_norm(alpha: float, n: int) -> float:
    r = np.arange(1, n // 2 + 1, dtype=float)
    return float(np.sum(r ** -alpha))


def couplings(alpha: float, n: int, kac_normalize: bool = True) -> np.ndarray:
    """Real-space couplings ``J_r`` for r = 1..n/2."""
    r = np.arange(1, n // 2 + 1, dtype=float)
    jr = r ** -alpha
    if kac_normalize:
        jr = jr / jr.sum()
    return jr


def jk_alpha(alpha: float, n: int, phi, kac_normalize: bool = True):
    """Fourier transform ``sum_r J_r exp(i phi r)`` at arbitrary momenta."""
    jr = couplings(alpha, n, kac_normalize)
    r = np.arange(1, n // 2 + 1, dtype=float)
    phi_arr = np.asarray(phi, dtype=float)
    out = np.exp(1j * np.multiply.outer(phi_arr, r)) @ jr
    return complex(out) if out.ndim == 0 else out


def jk_grid(params: ModelParams) -> np.ndarray:
    """``J_k`` on the antiperiodic grid via one FFT (O(N log N)).

    With phi_k = pi(2k-1)/N the sum becomes an inverse DFT of
    ``J_r exp(-i pi r / N)``.
    """
    n = params.n
    jr = couplings(params.alpha, n, params.kac_normalize)
    r = np.arange(1, n // 2 + 1)
    seq = np.zeros(n, dtype=complex)
    seq[r] = jr * np.exp(-1j * np.pi * r / n)
    full = np.fft.ifft(seq) * n
    return full[1 : n // 2 + 1]


def _angles(a, b_pair):
    # Bloch angle of the traceless block part (a, g Im J) in the y-z plane;
    # the Bogoliubov angle is half of it.  atan2(+0, negative) = pi reproduces
    # the degenerate-limit rule (u, v) = (0, 1) when h - Re J < 0.
    return 0.5 * np.arctan2(b_pair + 0.0, a)


@dataclass(frozen=True)
class Spectrum:
    """Vectorized mode data for every positive momentum of the grid."""

    phis: np.ndarray
    jk: np.ndarray
    lam: np.ndarray
    theta: np.ndarray
    eps_plus: np.ndarray
    eps_minus: np.ndarray
    shift: np.ndarray

    @property
    def qp_energies(self) -> np.ndarray:
        """Quasiparticle energies, shape (N/2, 2): columns are modes k and -k."""
        return np.stack([self.eps_plus, -self.eps_minus], axis=1)


def spectrum(params: ModelParams) -> Spectrum:
    phis = momentum_grid(params.n)
    jk = jk_grid(params)
    a = params.h - jk.real
    pair = params.gamma * jk.imag
    lam = np.hypot(a, pair)
    shift = -params.d * jk.imag
    return Spectrum(
        phis=phis,
        jk=jk,
        lam=lam,
        theta=_angles(a, pair),
        eps_plus=shift + lam,
        eps_minus=shift - lam,
        shift=shift,
    )


def mode_coefficients(params: ModelParams, phi: float) -> ModeCoefficients:
    jk = jk_alpha(params.alpha, params.n, phi, params.kac_normalize)
    a = params.h - jk.real
    pair = params.gamma * jk.imag
    lam = float(np.hypot(a, pair))
    theta = float(_angles(a, pair))
    shift = -params.d * jk.imag
    return ModeCoefficients(
        phi=float(phi),
        jk=jk,
        lam=lam,
        theta=theta,
        eps_plus=shift + lam,
        eps_minus=shift - lam,
        u=complex(np.cos(theta)),
        v=1j * np.sin(theta),
    )


def bdg_blocks(params: ModelParams, spec: Spectrum | None = None) -> np.ndarray:
    """Nambu blocks h_k for every grid momentum, shape (N/2, 2, 2)."""
    spec = spectrum(params) if spec is None else spec
    a = params.h - spec.jk.real
    pair = -1j * params.gamma * spec.jk.imag
    blocks = np.empty((len(spec.phis), 2, 2), dtype=complex)
    blocks[:, 0, 0] = spec.shift + a
    blocks[:, 1, 1] = spec.shift - a
    blocks[:, 0, 1] = pair
    blocks[:, 1, 0] = np.conj(pair)
    return blocks


def bdg_block(params: ModelParams, phi: float) -> np.ndarray:
    jk = jk_alpha(params.alpha, params.n, phi, params.kac_normalize)
    a = params.h - jk.real
    pair = -1j * params.gamma * jk.imag
    shift = -params.d * jk.imag
    return np.array([[shift + a, pair], [np.conj(pair), shift - a]], dtype=complex)


def gap(params: ModelParams, spec: Spectrum | None = None) -> float:
    """Smallest quasiparticle energy, clamped to zero when the chain is gapless."""
    spec = spectrum(params) if spec is None else spec
    e = spec.qp_energies
    emin = float(e.min())
    if emin < GAPLESS_RTOL * float(np.abs(e).max()):
        return 0.0
    return emin


def dispersion(params: ModelParams, spec: Spectrum | None = None):
    """Quasiparticle dispersion unfolded onto (-pi, pi), sorted by momentum."""
    spec = spectrum(params) if spec is None else spec
    phis = np.concatenate([-spec.phis[::-1], spec.phis])
    eps = np.concatenate([-spec.eps_minus[::-1], spec.eps_plus])
    return phis, eps


def fermi_points(params: ModelParams) -> list[tuple[float, float]]:
    """Grid intervals ``(phi_left, phi_right)`` bracketing gap closings.

    Two situations are reported: a sign change of the dispersion between
    neighbouring grid points (a Fermi sea edge), and a local minimum that sits
    within one grid step of zero (a gap that closes by touching, as at the
    D = 0 critical lines).  The zone is periodic, so intervals may wrap
    through pi.  No root polishing is done.
    """
    phis, eps = dispersion(params)
    m = len(eps)
    out = []
    for i in range(m):
        j = (i + 1) % m
        if eps[i] == 0.0 or np.sign(eps[i]) != np.sign(eps[j]):
            out.append((float(phis[i]), float(phis[j])))
    for i in range(m):
        left, right = (i - 1) % m, (i + 1) % m
        e, el, er = eps[i], eps[left], eps[right]
        if e <= 0 or e > el or e > er:
            continue
        if e > max(el - e, er - e):
            continue
        nb = left if el <= er else right
        lo, hi = (nb, i) if nb == left else (i, nb)
        interval = (float(phis[lo]), float(phis[hi]))
        if interval not in out:
            out.append(interval)
    return out


def ground_energy(params: ModelParams, spec: Spectrum | None = None) -> float:
    """Energy of the state with every negative-energy quasiparticle filled."""
    spec = spectrum(params) if spec is None else spec
    jk = spec.jk
    # H = sum_{k>0} [Psi^dag h_k Psi + xi_{-k} - h],  xi_{-k} = h - Re J + D Im J
    const = np.sum(-jk.real + params.d * jk.imag)
    e = spec.qp_energies
    # Psi^dag h Psi = eps_plus n_k - eps_minus n_{-k} + eps_minus
    return float(const + np.sum(spec.eps_minus) + np.sum(np.minimum(e, 0.0)))
