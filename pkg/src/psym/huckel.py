"""Hückel rings: analytic Bloch orbitals and their point-group representation.

Sites sit at angles 90 + 360 j / N degrees in the xy plane.  A p_z function
at site K is sent by g to R_zz(g) times the p_z function at the image site,
which gives the basis matrices D_B(g).  With the orthonormal site basis the
orbital representation is D(g) = x^T D_B(g) x.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .fockstate.hamiltonian import FciHamiltonian
from .pointgroup import GroupError, PointGroup, builtin_group
from .representation import RepSet, from_basis_overlap
from .slater import SlaterDeterminant

SUPPORTED_GROUPS = ("D6h", "D2h")


def site_positions(n_sites: int) -> np.ndarray:
    ang = np.deg2rad(90.0 + 360.0 * np.arange(n_sites) / n_sites)
    return np.stack([np.cos(ang), np.sin(ang), np.zeros(n_sites)], axis=1)


def basis_matrices(group: PointGroup, positions: np.ndarray, tol: float = 1e-8) -> dict[str, np.ndarray]:
    """Signed permutation matrices D_B(g) acting on p_z site functions."""
    n = len(positions)
    out = {}
    for e in group.elements:
        if e.matrix is None:
            raise GroupError(f"{group.name} element {e.id!r} has no Cartesian matrix")
        r = np.asarray(e.matrix, dtype=float)
        moved = positions @ r.T
        db = np.zeros((n, n))
        for k in range(n):
            dist = np.linalg.norm(positions - moved[k], axis=1)
            j = int(np.argmin(dist))
            if dist[j] > tol:
                raise GroupError(f"element {e.id!r} does not map the ring onto itself")
            db[j, k] = r[2, 2]
        out[e.id] = db
    return out


def bloch_orbitals(n_sites: int, alpha: float = 0.0, beta: float = -1.0) -> tuple[np.ndarray, np.ndarray]:
    """Real ring orbitals (columns) and energies alpha + 2 beta cos(2 pi k / N), sorted by energy.

    k = 0 and k = N/2 are single; every other k contributes a (cos, sin) pair.
    """
    j = np.arange(n_sites)
    cols, energies = [], []
    for k in range(n_sites // 2 + 1):
        e = alpha + 2 * beta * np.cos(2 * np.pi * k / n_sites)
        if k == 0 or 2 * k == n_sites:
            cols.append(np.cos(np.pi * k * j * 2 / n_sites) / np.sqrt(n_sites))
            energies.append(e)
        else:
            t = 2 * np.pi * k * j / n_sites
            cols += [np.sqrt(2 / n_sites) * np.cos(t), np.sqrt(2 / n_sites) * np.sin(t)]
            energies += [e, e]
    x = np.array(cols).T
    energies = np.array(energies)
    order = np.argsort(energies, kind="stable")
    return x[:, order], energies[order]


def _degenerate_blocks(energies: np.ndarray, tol: float = 1e-9) -> list[list[int]]:
    blocks: list[list[int]] = []
    for i, e in enumerate(energies):
        if blocks and abs(energies[blocks[-1][0]] - e) < tol:
            blocks[-1].append(i)
        else:
            blocks.append([i])
    return blocks


def _adapt_abelian(x: np.ndarray, energies: np.ndarray, db: dict[str, np.ndarray]) -> np.ndarray:
    """Rotate degenerate pairs so every orbital spans a one-dimensional irrep."""
    x = x.copy()
    # Fixed generic coefficients separate the irreps present in a degenerate block.
    coeffs = np.sqrt(np.arange(2, len(db) + 2, dtype=float))
    for block in _degenerate_blocks(energies):
        if len(block) == 1:
            continue
        sub = x[:, block]
        m = sum(c * sub.T @ d @ sub for c, d in zip(coeffs, db.values()))
        _, vecs = np.linalg.eigh(0.5 * (m + m.T))
        for c in range(vecs.shape[1]):
            k = int(np.argmax(np.abs(vecs[:, c])))
            vecs[:, c] *= np.sign(vecs[k, c])
        x[:, block] = sub @ vecs
    return x


@dataclass(frozen=True)
class HuckelModel:
    """Hückel ring with optional on-site Hubbard repulsion, at half filling by default."""

    n_sites: int = 6
    alpha: float = 0.0
    beta: float = -1.0
    group_name: str = "D6h"
    hubbard_u: float = 0.0
    n_electrons: int | None = None

    def __post_init__(self):
        n = self.n_sites
        if n % 2 or not 4 <= n <= 12:
            raise GroupError(f"ring size must be even and between 4 and 12, got {n}")
        if self.group_name not in SUPPORTED_GROUPS:
            raise GroupError(f"unsupported group {self.group_name!r}; choose from {SUPPORTED_GROUPS}")
        if self.group_name == "D6h" and n != 6:
            raise GroupError(f"D6h needs a 6-site ring, got {n}")
        ne = n if self.n_electrons is None else self.n_electrons
        if ne % 2 or not 0 <= ne <= 2 * n:
            raise GroupError(f"electron count must be even and between 0 and {2 * n}, got {ne}")
        object.__setattr__(self, "n_electrons", ne)

    @cached_property
    def group(self) -> PointGroup:
        return builtin_group(self.group_name)[0]

    @cached_property
    def positions(self) -> np.ndarray:
        return site_positions(self.n_sites)

    @cached_property
    def basis_matrices(self) -> dict[str, np.ndarray]:
        return basis_matrices(self.group, self.positions)

    @cached_property
    def _orbitals(self) -> tuple[np.ndarray, np.ndarray]:
        x, e = bloch_orbitals(self.n_sites, self.alpha, self.beta)
        if self.group_name == "D2h":
            x = _adapt_abelian(x, e, self.basis_matrices)
        return x, e

    @property
    def coefficients(self) -> np.ndarray:
        """MO coefficients, one column per orbital, in the site basis."""
        return self._orbitals[0]

    @property
    def energies(self) -> np.ndarray:
        return self._orbitals[1]

    @cached_property
    def rep(self) -> RepSet:
        return from_basis_overlap(self.coefficients, np.eye(self.n_sites), self.basis_matrices, group=self.group)

    def hf_determinant(self) -> SlaterDeterminant:
        return SlaterDeterminant.closed_shell(self.n_sites, self.n_electrons // 2)

    def hamiltonian(self) -> FciHamiltonian:
        x = self.coefficients
        h1 = np.diag(self.energies)
        eri = self.hubbard_u * np.einsum("jp,jq,jr,js->pqrs", x, x, x, x)
        return FciHamiltonian(self.n_sites, 0.0, h1, eri, n_electrons=self.n_electrons, ms2=0)

    def shell_orbitals(self, label: str) -> tuple[int, ...]:
        hits = [s.orbitals for s in self.rep.shells if s.label == label]
        if len(hits) != 1:
            raise GroupError(f"shell label {label!r} matches {len(hits)} shells")
        return hits[0]
