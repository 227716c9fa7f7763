"""Jordan-Wigner statevectors over 2n spin orbitals.

Qubit k is bit k of the basis-state index.  Spin orbitals are interleaved:
qubit 2*mu is orbital mu spin up, qubit 2*mu + 1 is orbital mu spin down.
Basis state |x> is prod_{k ascending} (c_k^dagger)^{x_k} |0>, so c_k^dagger
carries the Jordan-Wigner string Z_0 ... Z_{k-1}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

import numpy as np

Spin = Literal["up", "down", "both"]

NORM_TOL = 1e-10
UNITARY_TOL = 1e-8


class FockError(ValueError):
    pass


@dataclass(frozen=True)
class FockState:
    n_spatial: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (4**self.n_spatial,):
            raise FockError(
                f"expected {4**self.n_spatial} amplitudes for n_spatial={self.n_spatial}, got shape {amps.shape}"
            )
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_qubits(self) -> int:
        return 2 * self.n_spatial

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm - 1.0) <= tol

    def normalized(self) -> "FockState":
        nrm = self.norm
        if nrm == 0:
            raise FockError("cannot normalize the zero vector")
        return FockState(self.n_spatial, self.amplitudes / nrm)

    def inner(self, other: "FockState") -> complex:
        """<self|other>."""
        _check_same_size(self, other)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def __add__(self, other: "FockState") -> "FockState":
        _check_same_size(self, other)
        return FockState(self.n_spatial, self.amplitudes + other.amplitudes)

    def __sub__(self, other: "FockState") -> "FockState":
        _check_same_size(self, other)
        return FockState(self.n_spatial, self.amplitudes - other.amplitudes)

    def scaled(self, c: complex) -> "FockState":
        return FockState(self.n_spatial, c * self.amplitudes)

    def sectors(self, tol: float = 0.0) -> list[tuple[int, int]]:
        """(n_alpha, n_beta) sectors carrying amplitude larger than ``tol``."""
        na, nb = particle_numbers(self.n_spatial)
        hit = np.abs(self.amplitudes) > tol
        return sorted(set(zip(na[hit].tolist(), nb[hit].tolist())))

    @classmethod
    def zeros(cls, n_spatial: int) -> "FockState":
        return cls(n_spatial, np.zeros(4**n_spatial, dtype=complex))

    @classmethod
    def from_occupations(cls, n_spatial: int, up, down) -> "FockState":
        """Single determinant with the given 0-based occupied orbitals."""
        amps = np.zeros(4**n_spatial, dtype=complex)
        amps[determinant_index(n_spatial, up, down)] = 1.0
        return cls(n_spatial, amps)

    @classmethod
    def random(
        cls,
        n_spatial: int,
        rng: np.random.Generator,
        n_alpha: int | None = None,
        n_beta: int | None = None,
    ) -> "FockState":
        """Normalized Gaussian-random state, optionally restricted to a particle sector."""
        dim = 4**n_spatial
        amps = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        if n_alpha is not None or n_beta is not None:
            na, nb = particle_numbers(n_spatial)
            keep = np.ones(dim, dtype=bool)
            if n_alpha is not None:
                keep &= na == n_alpha
            if n_beta is not None:
                keep &= nb == n_beta
            amps[~keep] = 0
        return cls(n_spatial, amps / np.linalg.norm(amps))


def _check_same_size(a: FockState, b: FockState) -> None:
    if a.n_spatial != b.n_spatial:
        raise FockError(f"dimension mismatch: n_spatial {a.n_spatial} vs {b.n_spatial}")


def determinant_index(n_spatial: int, up, down) -> int:
    idx = 0
    for orbs, spin in ((up, 0), (down, 1)):
        orbs = list(orbs)
        if len(set(orbs)) != len(orbs):
            raise FockError(f"repeated orbital in {orbs}")
        for mu in orbs:
            if not 0 <= mu < n_spatial:
                raise FockError(f"orbital {mu} out of range for n_spatial={n_spatial}")
            idx |= 1 << (2 * mu + spin)
    return idx


@lru_cache(maxsize=None)
def occupations(n_spatial: int) -> np.ndarray:
    """Boolean (4^n, 2n) table: occupations[x, k] is bit k of x."""
    x = np.arange(4**n_spatial)
    occ = ((x[:, None] >> np.arange(2 * n_spatial)) & 1).astype(bool)
    occ.flags.writeable = False
    return occ


@lru_cache(maxsize=None)
def particle_numbers(n_spatial: int) -> tuple[np.ndarray, np.ndarray]:
    occ = occupations(n_spatial)
    na = occ[:, 0::2].sum(axis=1)
    nb = occ[:, 1::2].sum(axis=1)
    na.flags.writeable = False
    nb.flags.writeable = False
    return na, nb


@lru_cache(maxsize=None)
def _layout(n_spatial: int) -> tuple[np.ndarray, np.ndarray]:
    """Interleaved index and reordering sign for every (up string a, down string b).

    (prod_up c^dagger)(prod_down c^dagger)|0> = sign * |x(a, b)>; the sign
    counts pairs (down nu, up mu) with nu < mu.
    """
    m = 2**n_spatial
    a = np.arange(m)
    bits = (a[:, None] >> np.arange(n_spatial)) & 1
    spread = (bits << (2 * np.arange(n_spatial))).sum(axis=1)
    index = spread[:, None] | (spread[None, :] << 1)
    # For each up orbital mu occupied, count down orbitals nu < mu occupied.
    below = np.cumsum(bits, axis=1) - bits
    # swaps[a, b, mu] = up_bit(a, mu) * #down(b, < mu)
    swaps = bits[:, None, :] * below[None, :, :]
    sign = np.where(swaps.sum(axis=2) % 2 == 0, 1.0, -1.0)
    index.flags.writeable = False
    sign.flags.writeable = False
    return index, sign


def to_blocked_matrix(state: FockState) -> np.ndarray:
    """Amplitudes as C[a, b] over (up string, down string) in blocked operator order."""
    index, sign = _layout(state.n_spatial)
    return sign * state.amplitudes[index]


def from_blocked_matrix(n_spatial: int, c: np.ndarray) -> FockState:
    index, sign = _layout(n_spatial)
    amps = np.empty(4**n_spatial, dtype=complex)
    amps[index] = sign * c
    return FockState(n_spatial, amps)


def to_blocked_vector(state: FockState) -> np.ndarray:
    """Amplitudes in blocked ordering (qubits 0..n-1 spin up, n..2n-1 spin down)."""
    return to_blocked_matrix(state).T.reshape(-1)


def from_blocked_vector(n_spatial: int, vec: np.ndarray) -> FockState:
    m = 2**n_spatial
    return from_blocked_matrix(n_spatial, np.asarray(vec, dtype=complex).reshape(m, m).T)


@lru_cache(maxsize=None)
def _combos(n: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    combos = np.array(list(itertools.combinations(range(n), k)), dtype=int).reshape(-1, k)
    idx = (1 << combos).sum(axis=1) if k else np.zeros(1, dtype=int)
    return combos, idx


def exterior_power(u: np.ndarray) -> np.ndarray:
    """Many-body matrix of the one-body map c_p^dagger -> sum_q u[q, p] c_q^dagger on 2^n strings.

    Entry [I, J] is det u[I, J] for occupation strings of equal size, zero otherwise.
    """
    u = np.asarray(u, dtype=complex)
    n = u.shape[0]
    out = np.zeros((2**n, 2**n), dtype=complex)
    out[0, 0] = 1.0
    for k in range(1, n + 1):
        combos, idx = _combos(n, k)
        sub = u[combos[:, None, :, None], combos[None, :, None, :]]
        out[np.ix_(idx, idx)] = np.linalg.det(sub)
    return out


def check_unitary(u: np.ndarray, n: int, tol: float = UNITARY_TOL) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.shape != (n, n):
        raise FockError(f"orbital rotation has shape {u.shape}, expected {(n, n)}")
    res = float(np.max(np.abs(u.conj().T @ u - np.eye(n)), initial=0.0))
    if res > tol:
        raise FockError(f"orbital rotation is not unitary (residual {res:.2e})")
    return u


def apply_orbital_rotation(state: FockState, u: np.ndarray, spin: Spin = "both") -> FockState:
    """Apply exp(sum_{mu nu} [log u]_{mu nu} c^dagger_{mu s} c_{nu s}) on the chosen spin sector(s)."""
    n = state.n_spatial
    u = check_unitary(u, n)
    if spin not in ("up", "down", "both"):
        raise FockError(f"spin must be 'up', 'down' or 'both', got {spin!r}")
    lam = exterior_power(u)
    c = to_blocked_matrix(state)
    if spin in ("up", "both"):
        c = lam @ c
    if spin in ("down", "both"):
        c = c @ lam.T
    return from_blocked_matrix(n, c)


def apply_diagonal_phase(state: FockState, phases: np.ndarray) -> FockState:
    """Multiply every basis amplitude by exp(i * phases[x])."""
    return FockState(state.n_spatial, state.amplitudes * np.exp(1j * np.asarray(phases)))


def orbital_phase_function(n_spatial: int, orbital_phases: np.ndarray) -> np.ndarray:
    """sum over occupied spin orbitals of the phase of their spatial orbital, per basis state."""
    occ = occupations(n_spatial)
    per_qubit = np.repeat(np.asarray(orbital_phases, dtype=float), 2)
    return occ @ per_qubit
