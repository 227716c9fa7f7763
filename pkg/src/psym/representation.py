"""Orbital representation matrices D(g) organised into shells of degenerate orbitals.

Orbital indices are 0-based in the Python API and 1-based in rep-spec files.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
import scipy.linalg

from . import _jsonio
from .pointgroup import PointGroup, reduce_representation

UNITARY_TOL = 1e-8
SHELL_TOL = 1e-8
PAULI_TOL = 1e-10


class RepresentationError(ValueError):
    pass


class BranchCutWarning(UserWarning):
    """An eigenphase sits exactly on the principal-log branch cut (phase pi)."""


def _unitarity_residual(m: np.ndarray) -> float:
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])), initial=0.0))


@dataclass(frozen=True)
class Shell:
    label: str
    orbitals: tuple[int, ...]
    matrices: Mapping[str, np.ndarray] = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.orbitals)


@dataclass(frozen=True)
class RepSet:
    """Block-diagonal orbital representation, one unitary block per shell and element."""

    n_spatial: int
    shells: tuple[Shell, ...]
    element_ids: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "shells", tuple(self.shells))
        object.__setattr__(self, "element_ids", tuple(self.element_ids))
        seen = sorted(i for s in self.shells for i in s.orbitals)
        if seen != list(range(self.n_spatial)):
            raise RepresentationError(
                f"shell orbitals must partition 0..{self.n_spatial - 1}, got {seen}"
            )
        for s in self.shells:
            for g in self.element_ids:
                if g not in s.matrices:
                    raise RepresentationError(f"shell {s.label!r} has no matrix for element {g!r}")
                m = s.matrices[g]
                if m.shape != (s.size, s.size):
                    raise RepresentationError(
                        f"shell {s.label!r}, element {g!r}: block shape {m.shape}, expected {(s.size, s.size)}"
                    )
                res = _unitarity_residual(m)
                if res > UNITARY_TOL:
                    raise RepresentationError(
                        f"shell {s.label!r}, element {g!r} is not unitary (residual {res:.2e})"
                    )

    def matrix(self, element: str) -> np.ndarray:
        """Assembled n x n matrix D(g)."""
        self._check_element(element)
        d = np.zeros((self.n_spatial, self.n_spatial), dtype=complex)
        for s in self.shells:
            idx = np.array(s.orbitals)
            d[np.ix_(idx, idx)] = s.matrices[element]
        return d

    def block(self, shell: int, element: str) -> np.ndarray:
        self._check_element(element)
        return self.shells[shell].matrices[element]

    def shell_of(self, orbital: int) -> int:
        for k, s in enumerate(self.shells):
            if orbital in s.orbitals:
                return k
        raise RepresentationError(f"orbital {orbital} not in any shell")

    def _check_element(self, element: str) -> None:
        if element not in self.element_ids:
            raise RepresentationError(f"no representation matrix for element {element!r}")

    @classmethod
    def from_matrices(
        cls,
        matrices: Mapping[str, np.ndarray],
        shells: Sequence[tuple[str, Sequence[int]]] | None = None,
        group: PointGroup | None = None,
        tol: float = SHELL_TOL,
    ) -> "RepSet":
        """Split full n x n matrices into shells, inferring the shells from block sparsity if not given."""
        ids = list(matrices)
        mats = {g: np.asarray(matrices[g], dtype=complex) for g in ids}
        n = next(iter(mats.values())).shape[0]
        for g, m in mats.items():
            if m.shape != (n, n):
                raise RepresentationError(f"matrix for {g!r} has shape {m.shape}, expected {(n, n)}")
        if shells is None:
            groups = _infer_shells(mats, n, tol)
            shells = [(_shell_label(mats, idx, group, k), idx) for k, idx in enumerate(groups)]
        out = []
        covered = np.zeros((n, n), dtype=bool)
        for label, idx in shells:
            idx = tuple(int(i) for i in idx)
            covered[np.ix_(idx, idx)] = True
            out.append(Shell(label, idx, {g: mats[g][np.ix_(idx, idx)].copy() for g in ids}))
        for g, m in mats.items():
            leak = float(np.max(np.abs(m[~covered]), initial=0.0))
            if leak > tol:
                raise RepresentationError(f"element {g!r} mixes orbitals across shells (max {leak:.2e})")
        return cls(n, tuple(out), tuple(ids))


def _infer_shells(mats: Mapping[str, np.ndarray], n: int, tol: float) -> list[list[int]]:
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for m in mats.values():
        rows, cols = np.nonzero(np.abs(m) > tol)
        for i, j in zip(rows, cols):
            ri, rj = find(int(i)), find(int(j))
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    comps: dict[int, list[int]] = {}
    for i in range(n):
        comps.setdefault(find(i), []).append(i)
    return sorted(comps.values(), key=lambda c: c[0])


def _shell_label(mats, idx, group: PointGroup | None, k: int) -> str:
    fallback = f"s{k + 1}"
    if group is None or any(g not in mats for g in group.element_ids):
        return fallback
    traces: dict[str, complex] = {}
    for c in group.table.class_labels:
        members = group.elements_in_class(c)
        traces[c] = np.mean([np.trace(mats[g][np.ix_(idx, idx)]) for g in members])
    occ = reduce_representation(group.table, traces).occurrences
    hits = [label for label, v in occ.items() if abs(v) > 1e-6]
    if len(hits) == 1 and abs(occ[hits[0]] - 1) < 1e-6:
        return hits[0].lower()
    return fallback


def validate(rep: RepSet, group: PointGroup | None = None, tol: float = UNITARY_TOL) -> list[str]:
    """Return problems found: identity, element coverage and homomorphism when the group has matrices."""
    problems = []
    if group is None:
        return problems
    missing = [g for g in group.element_ids if g not in rep.element_ids]
    if missing:
        return [f"missing matrices for elements {missing}"]
    e = group.identity
    for s in rep.shells:
        res = float(np.max(np.abs(s.matrices[e] - np.eye(s.size))))
        if res > tol:
            problems.append(f"shell {s.label!r}: D(E) differs from identity by {res:.2e}")
    table = group.product_table()
    if table is not None:
        for (a, b), c in table.items():
            for s in rep.shells:
                res = float(np.max(np.abs(s.matrices[a] @ s.matrices[b] - s.matrices[c])))
                if res > tol:
                    problems.append(f"shell {s.label!r}: D({a})D({b}) != D({c}) (residual {res:.2e})")
    return problems


def from_basis_overlap(
    x: np.ndarray,
    S: np.ndarray,
    DB: Mapping[str, np.ndarray],
    shells: Sequence[tuple[str, Sequence[int]]] | None = None,
    group: PointGroup | None = None,
    tol: float = UNITARY_TOL,
) -> RepSet:
    """Orbital representation D(g) = x^dagger S D_B(g) x from a non-orthogonal basis expansion."""
    x = np.asarray(x, dtype=complex)
    S = np.asarray(S, dtype=complex)
    if x.ndim != 2 or S.ndim != 2 or S.shape[0] != S.shape[1] or S.shape[0] != x.shape[0]:
        raise RepresentationError(f"dimension mismatch: x {x.shape}, S {S.shape}")
    res = float(np.max(np.abs(x.conj().T @ S @ x - np.eye(x.shape[1]))))
    if res > tol:
        raise RepresentationError(f"orbital columns are not orthonormal under S (max residual {res:.2e})")
    mats = {}
    for g, db in DB.items():
        db = np.asarray(db, dtype=complex)
        if db.shape != S.shape:
            raise RepresentationError(f"basis matrix for {g!r} has shape {db.shape}, expected {S.shape}")
        mats[g] = x.conj().T @ S @ db @ x
    return RepSet.from_matrices(mats, shells=shells, group=group)


@dataclass(frozen=True)
class RepEigen:
    """Per element and shell: unitary eigenvectors V and eigenphases in (-pi, pi]."""

    vectors: Mapping[str, tuple[np.ndarray, ...]]
    phases: Mapping[str, tuple[np.ndarray, ...]]

    def rotation(self, rep: RepSet, element: str) -> np.ndarray:
        """Block-diagonal n x n matrix holding V^g for every shell."""
        v = np.zeros((rep.n_spatial, rep.n_spatial), dtype=complex)
        for s, vs in zip(rep.shells, self.vectors[element]):
            idx = np.array(s.orbitals)
            v[np.ix_(idx, idx)] = vs
        return v

    def orbital_phases(self, rep: RepSet, element: str) -> np.ndarray:
        """Eigenphase attached to each rotated orbital, indexed like the original orbitals."""
        ph = np.zeros(rep.n_spatial)
        for s, p in zip(rep.shells, self.phases[element]):
            ph[list(s.orbitals)] = p
        return ph

    def is_diagonal(self, rep: RepSet, element: str, tol: float = 1e-12) -> bool:
        return bool(np.allclose(self.rotation(rep, element), np.eye(rep.n_spatial), atol=tol))


def eig_unitary(m: np.ndarray, tol: float = UNITARY_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a unitary matrix with phases in (-pi, pi].

    Eigenpairs are sorted by phase; near-equal phases are ordered by the
    rounded (re, im) entries of their eigenvectors.  Each eigenvector is
    scaled so its first largest-magnitude entry is real positive.
    """
    m = np.asarray(m, dtype=complex)
    res = _unitarity_residual(m)
    if res > tol:
        raise RepresentationError(f"block is not unitary (residual {res:.2e})")
    # Complex Schur form of a normal matrix is diagonal with unitary Z, which
    # stays orthonormal inside degenerate eigenspaces.
    t, z = scipy.linalg.schur(m, output="complex")
    phases = np.angle(np.diag(t))
    phases[phases <= -np.pi + 1e-12] = np.pi
    for k in range(z.shape[1]):
        col = z[:, k]
        mag = np.abs(col)
        j = int(np.argmax(mag >= mag.max() - 1e-12))
        z[:, k] = col * (abs(col[j]) / col[j])

    def key(k):
        vec = tuple(x for c in z[:, k] for x in (round(c.real, 12), round(c.imag, 12)))
        return (round(phases[k], 10), vec)

    order = sorted(range(len(phases)), key=key)
    return z[:, order], phases[order]


def diagonalize(rep: RepSet) -> RepEigen:
    vectors, phases = {}, {}
    for g in rep.element_ids:
        vs, ps = [], []
        for s in rep.shells:
            v, p = eig_unitary(s.matrices[g])
            vs.append(v)
            ps.append(p)
        vectors[g] = tuple(vs)
        phases[g] = tuple(ps)
    return RepEigen(vectors, phases)


def log_generator(rep: RepSet, element: str) -> list[np.ndarray]:
    """Principal logarithm of each shell block, with eigenphases in (-pi, pi].

    Emits :class:`BranchCutWarning` when a phase equals pi; the value pi is used.
    """
    out = []
    on_cut = False
    for k in range(len(rep.shells)):
        v, p = eig_unitary(rep.block(k, element))
        on_cut |= bool(np.any(np.abs(p - np.pi) < 1e-12))
        out.append((v * (1j * p)) @ v.conj().T)
    if on_cut:
        warnings.warn(f"eigenphase pi on the branch cut for element {element!r}", BranchCutWarning, stacklevel=2)
    return out


def pauli_shortcut(rep: RepSet, tol: float = PAULI_TOL) -> dict[str, frozenset[int]] | None:
    """For reps made only of +-1 one-dimensional blocks, the orbitals carrying -1 per element."""
    out = {}
    for g in rep.element_ids:
        minus = set()
        for s in rep.shells:
            if s.size != 1:
                return None
            val = s.matrices[g][0, 0]
            if abs(val - 1) <= tol:
                continue
            if abs(val + 1) <= tol:
                minus.add(s.orbitals[0])
            else:
                return None
        out[g] = frozenset(minus)
    return out


# --- rep-spec files --------------------------------------------------------

def rep_to_json(rep: RepSet) -> dict:
    return {
        "n_spatial": rep.n_spatial,
        "shells": [{"label": s.label, "orbitals": [i + 1 for i in s.orbitals]} for s in rep.shells],
        "matrices": {
            g: [_jsonio.encode_complex(s.matrices[g]) for s in rep.shells] for g in rep.element_ids
        },
    }


def rep_from_json(data: Mapping) -> RepSet:
    try:
        n = int(data["n_spatial"])
        shell_specs = [(s["label"], [int(i) - 1 for i in s["orbitals"]]) for s in data["shells"]]
        shells = []
        for k, (label, idx) in enumerate(shell_specs):
            mats = {
                g: _jsonio.decode_complex(blocks[k], 2)
                for g, blocks in data["matrices"].items()
            }
            shells.append(Shell(label, tuple(idx), mats))
    except (KeyError, TypeError, IndexError) as exc:
        raise RepresentationError(f"malformed rep-spec file: {exc}") from exc
    return RepSet(n, tuple(shells), tuple(data["matrices"]))


def save_rep(rep: RepSet, path: str | Path) -> None:
    _jsonio.dump(rep_to_json(rep), path)


def load_rep(path: str | Path) -> RepSet:
    return rep_from_json(_jsonio.load(path))


def basis_to_json(x: np.ndarray, S: np.ndarray, DB: Mapping[str, np.ndarray]) -> dict:
    return {
        "S": _jsonio.encode_complex(S),
        "x": _jsonio.encode_complex(x),
        "DB": {g: _jsonio.encode_complex(m) for g, m in DB.items()},
    }


def load_basis(path: str | Path, group: PointGroup | None = None) -> RepSet:
    """Build a RepSet from a raw-basis file ``{"S", "x", "DB"}``."""
    data = _jsonio.load(path)
    try:
        S = _jsonio.decode_complex(data["S"], 2)
        x = _jsonio.decode_complex(data["x"], 2)
        DB = {g: _jsonio.decode_complex(m, 2) for g, m in data["DB"].items()}
    except KeyError as exc:
        raise RepresentationError(f"raw-basis file lacks {exc}") from exc
    return from_basis_overlap(x, S, DB, group=group)
