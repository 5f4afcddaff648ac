"""Dense exact diagonalization of the spin chain for small N.

The Jordan-Wigner image of the periodic spin chain is antiperiodic in the
even fermion-parity sector and periodic in the odd one.  The free-fermion
pipeline works in the antiperiodic sector only, so the reference Hamiltonian
built here is the spin Hamiltonian with every boundary-crossing bond dressed
by the global parity ``P = prod_j sigma^z_j``: it coincides with the literal
periodic spin Hamiltonian on P = +1 and continues it antiperiodically on
P = -1.  :func:`spin_hamiltonian` gives the literal operator for comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np
import scipy.linalg

from . import core
from .core import ModelParams
from .numerics import entropy_bits

MAX_SITES = 12
DEGENERACY_TOL = 1e-10

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_SP = np.array([[0, 1], [0, 0]], dtype=complex)  # |up><down|, annihilates a fermion
PAULI = {"x": _X, "y": _Y, "z": _Z}


def _site_op(op, j, n):
    """``op`` on site j (0-based) of an n-site chain."""
    mats = [_I2] * n
    mats[j] = op
    return reduce(np.kron, mats)


def _diag_z(n):
    # sigma^z eigenvalue of each site for every basis state, site 0 most significant
    bits = (np.arange(2**n)[:, None] >> (n - 1 - np.arange(n))[None, :]) & 1
    return 1 - 2 * bits


class SpinOps:
    """Pauli and Jordan-Wigner fermion operators of an n-site chain (dense)."""

    def __init__(self, n: int):
        if n > MAX_SITES:
            raise ValueError(f"dense ED limited to n <= {MAX_SITES}, got {n}")
        self.n = n
        self.sigma = {k: [_pauli_string(n, {j: k}) for j in range(n)] for k in PAULI}
        zdiag = _diag_z(n)
        self.parity_diag = np.prod(zdiag, axis=1).astype(float)
        strings = np.cumprod(np.concatenate([np.ones((2**n, 1)), zdiag[:, :-1]], axis=1), axis=1)
        self.c = [strings[:, j][:, None] * _site_op(_SP, j, n) for j in range(n)]

    def string(self, j, r):
        """Product of sigma^z on sites j+1 .. j+r-1 (mod n)."""
        out = np.ones(2**self.n)
        zdiag = _diag_z(self.n)
        for l in range(j + 1, j + r):
            out = out * zdiag[:, l % self.n]
        return out


def _pauli_string(n: int, sites: dict) -> np.ndarray:
    """Dense matrix of a Pauli string ``{site: "x"|"y"|"z"}``.

    A Pauli string maps each basis state to one other basis state times a
    phase, so the matrix is assembled in O(2^n) instead of by Kronecker products.
    """
    idx = np.arange(2**n)
    zdiag = _diag_z(n)
    mask = 0
    phase = np.ones(2**n, dtype=complex)
    for j, kind in sites.items():
        if kind in "xy":
            mask |= 1 << (n - 1 - j)
        if kind == "y":
            phase = phase * 1j * zdiag[:, j]
        elif kind == "z":
            phase = phase * zdiag[:, j]
    out = np.zeros((2**n, 2**n), dtype=complex)
    out[idx ^ mask, idx] = phase
    return out


def _bond(ops: SpinOps, j, r, gamma, d):
    n = ops.n
    k = (j + r) % n
    string = {l % n: "z" for l in range(j + 1, j + r)}
    out = 0
    for a, b, coef in (("x", "x", (1 + gamma) / 4), ("y", "y", (1 - gamma) / 4), ("x", "y", d / 4), ("y", "x", -d / 4)):
        if coef != 0:
            out = out + coef * _pauli_string(n, {**string, j: a, k: b})
    return out


def spin_hamiltonian(params: ModelParams, ops: SpinOps | None = None, twisted: bool = True) -> np.ndarray:
    """Dense spin Hamiltonian with Jordan-Wigner strings and periodic wrapping.

    ``twisted=True`` multiplies boundary-crossing bonds by the parity operator
    (see module docstring); ``twisted=False`` gives the literal operator.
    """
    n = params.n
    ops = SpinOps(n) if ops is None else ops
    jr = core.couplings(params.alpha, n, params.kac_normalize)
    dim = 2**n
    h = np.zeros((dim, dim), dtype=complex)
    for r in range(1, n // 2 + 1):
        for j in range(n):
            term = -jr[r - 1] * _bond(ops, j, r, params.gamma, params.d)
            if twisted and j + r >= n:
                term = ops.parity_diag[:, None] * term
            h += term
    for j in range(n):
        h -= params.h / 2 * ops.sigma["z"][j]
    return h


def fermion_hamiltonian(params: ModelParams, ops: SpinOps | None = None) -> np.ndarray:
    """Same model written directly with fermion matrices and c_{j+N} = -c_j."""
    n = params.n
    ops = SpinOps(n) if ops is None else ops
    jr = core.couplings(params.alpha, n, params.kac_normalize)
    c = ops.c
    cd = [m.conj().T for m in c]
    dim = 2**n
    h = np.zeros((dim, dim), dtype=complex)
    for r in range(1, n // 2 + 1):
        for j in range(n):
            k = (j + r) % n
            sign = -1.0 if j + r >= n else 1.0
            t = (1 - 1j * params.d) * (cd[j] @ c[k]) + params.gamma * (cd[j] @ cd[k])
            h += -jr[r - 1] / 2 * sign * (t + t.conj().T)
    for j in range(n):
        h += params.h * (cd[j] @ c[j] - 0.5 * np.eye(dim))
    return h


@dataclass
class DenseSpinSystem:
    params: ModelParams
    ops: SpinOps
    hamiltonian: np.ndarray
    energies: np.ndarray
    vectors: np.ndarray

    @property
    def ground_energy(self) -> float:
        return float(self.energies[0])

    @property
    def ground_vector(self) -> np.ndarray:
        return self.vectors[:, 0]

    @property
    def degenerate(self) -> bool:
        return bool(self.energies[1] - self.energies[0] < DEGENERACY_TOL)

    def evolve(self, psi: np.ndarray, t: float) -> np.ndarray:
        phase = np.exp(-1j * self.energies * t)
        return self.vectors @ (phase * (self.vectors.conj().T @ psi))


def ed_build(params: ModelParams) -> DenseSpinSystem:
    if params.n > MAX_SITES:
        raise ValueError(f"dense ED limited to n <= {MAX_SITES}, got {params.n}")
    ops = SpinOps(params.n)
    h = spin_hamiltonian(params, ops)
    w, v = scipy.linalg.eigh(h)
    return DenseSpinSystem(params, ops, h, w, v)


def reduced_density(psi: np.ndarray, n: int, keep) -> np.ndarray:
    """Partial trace of |psi><psi| onto the (0-based) sites ``keep``, in that order."""
    keep = list(keep)
    rest = [j for j in range(n) if j not in keep]
    t = psi.reshape([2] * n).transpose(keep + rest).reshape(2 ** len(keep), -1)
    return t @ t.conj().T


def expect(op, psi: np.ndarray) -> complex:
    """<psi| op |psi>; ``op`` may be a matrix or a sequence of matrices (a product)."""
    ops = [op] if isinstance(op, np.ndarray) else list(op)
    v = psi
    for m in reversed(ops):
        v = m @ v
    return complex(np.vdot(psi, v))


@dataclass
class EDObservables:
    mz: float
    corr: dict
    rho: np.ndarray
    block_entropy: float
    mutual_information: float
    chiral_order: float


def two_site_rho(psi, n, r):
    return reduced_density(psi, n, [0, r])


def ed_correlator(system: DenseSpinSystem, a: str, b: str, r: int, psi=None) -> float:
    psi = system.ground_vector if psi is None else psi
    s = system.ops.sigma
    return expect((s[a][0], s[b][r]), psi).real


def ed_observables(system: DenseSpinSystem, r: int, l: int, psi=None) -> EDObservables:
    n = system.params.n
    if not 1 <= r <= n // 2 or not 1 <= l <= n // 2:
        raise ValueError("r and l must lie in 1..n/2")
    psi = system.ground_vector if psi is None else psi
    s = system.ops.sigma
    mz = expect(s["z"][0], psi).real
    corr = {
        a + b: expect((s[a][0], s[b][r]), psi).real for a in "xyz" for b in "xyz"
    }
    rho = two_site_rho(psi, n, r)
    s_pair = entropy_bits(np.linalg.eigvalsh(rho))
    s_one = entropy_bits(np.linalg.eigvalsh(reduced_density(psi, n, [0])))
    s_other = entropy_bits(np.linalg.eigvalsh(reduced_density(psi, n, [r])))
    block = entropy_bits(np.linalg.eigvalsh(reduced_density(psi, n, range(l))))
    cur = (expect((s["x"][0], s["y"][1]), psi) - expect((s["y"][0], s["x"][1]), psi)).real / 4
    return EDObservables(mz, corr, rho, block, s_one + s_other - s_pair, cur)


def ed_hopping(system: DenseSpinSystem, m: int, nn: int, psi) -> complex:
    """<c_m^dag c_n> for 1-based sites."""
    c = system.ops.c
    return expect((c[m - 1].conj().T, c[nn - 1]), psi)
