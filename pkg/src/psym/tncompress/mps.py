"""Matrix product states on qubit chains.

Site p carries a tensor of shape (m_p, 2, m_{p+1}) and corresponds to qubit p,
the bit of weight 2^p in the statevector index.  Two-site gates use the index
2 sigma_p + sigma_{p+1}.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..fockstate.hamiltonian import max_qubits
from ..fockstate.state import FockState

DENSE_MAX_QUBITS = 24
NORM_TOL = 1e-10
# Singular values below this fraction of the largest are treated as exact zeros.
SVD_CUTOFF = 1e-14
MAGIC = b"PMPS1"


class MpsError(ValueError):
    """Invalid MPS, gate or size."""


@dataclass(frozen=True)
class MPS:
    tensors: tuple[np.ndarray, ...] = field(repr=False)
    right_normalized: bool = False

    def __post_init__(self):
        ts = tuple(np.asarray(t, dtype=complex) for t in self.tensors)
        if not ts:
            raise MpsError("an MPS needs at least one site")
        for p, t in enumerate(ts):
            if t.ndim != 3 or t.shape[1] != 2:
                raise MpsError(f"site {p}: tensor shape {t.shape}, expected (m, 2, m')")
            if p and ts[p - 1].shape[2] != t.shape[0]:
                raise MpsError(f"bond mismatch between sites {p - 1} and {p}")
        if ts[0].shape[0] != 1 or ts[-1].shape[2] != 1:
            raise MpsError("boundary bonds must have dimension 1")
        object.__setattr__(self, "tensors", ts)

    @property
    def n_sites(self) -> int:
        return len(self.tensors)

    @property
    def bond_dims(self) -> list[int]:
        """m_1 .. m_{N+1}, boundaries included."""
        return [t.shape[0] for t in self.tensors] + [1]

    def inner(self, other: "MPS") -> complex:
        """<self|other>."""
        if other.n_sites != self.n_sites:
            raise MpsError(f"site count mismatch: {self.n_sites} vs {other.n_sites}")
        env = np.ones((1, 1), dtype=complex)
        for a, b in zip(self.tensors, other.tensors):
            x = np.tensordot(env, a.conj(), ([0], [0]))
            env = np.tensordot(x, b, ([0, 1], [0, 1]))
        return complex(env[0, 0])

    @property
    def norm(self) -> float:
        return float(np.sqrt(abs(self.inner(self))))

    def right_normalization_residual(self) -> float:
        """Largest deviation of sum_{s, m'} A A^dagger from the identity over all sites."""
        res = 0.0
        for t in self.tensors:
            m = t.reshape(t.shape[0], -1)
            res = max(res, float(np.max(np.abs(m @ m.conj().T - np.eye(t.shape[0])))))
        return res

    @classmethod
    def product(cls, bits) -> "MPS":
        """Computational basis state; bits[p] is qubit p."""
        ts = []
        for b in bits:
            t = np.zeros((1, 2, 1), dtype=complex)
            t[0, int(b), 0] = 1.0
            ts.append(t)
        return cls(tuple(ts), right_normalized=True)

    @classmethod
    def vacuum(cls, n_sites: int) -> "MPS":
        return cls.product([0] * n_sites)

    @classmethod
    def random(cls, n_sites: int, bond: int, rng: np.random.Generator) -> "MPS":
        """Gaussian random tensors with bond dimension ``bond``, brought to right-normalized form."""
        dims = [1] + [bond] * (n_sites - 1) + [1]
        ts = [
            rng.standard_normal((dims[p], 2, dims[p + 1])) + 1j * rng.standard_normal((dims[p], 2, dims[p + 1]))
            for p in range(n_sites)
        ]
        return right_canonicalize(cls(tuple(ts)))[0]


def _amplitude_tensor(amps: np.ndarray) -> np.ndarray:
    n = int(round(np.log2(len(amps))))
    if 2**n != len(amps):
        raise MpsError(f"statevector length {len(amps)} is not a power of two")
    # C-order reshape puts the most significant bit first; reverse so axis p is qubit p.
    return amps.reshape((2,) * n).transpose(tuple(range(n - 1, -1, -1)))


def _truncate(s: np.ndarray, chi: int) -> tuple[int, float]:
    keep = int(np.sum(s > SVD_CUTOFF * s[0])) if s.size and s[0] > 0 else 1
    keep = max(1, min(keep, chi))
    return keep, float(np.sum(s[keep:] ** 2))


def mps_from_statevector(state: FockState | np.ndarray, chi: int) -> tuple[MPS, float]:
    """Right-normalized MPS of a normalized state, keeping at most ``chi`` singular values per bond.

    Returns the MPS and the sum of discarded squared singular values.
    """
    if chi < 1:
        raise MpsError("bond dimension must be at least 1")
    amps = state.amplitudes if isinstance(state, FockState) else np.asarray(state, dtype=complex)
    if abs(np.linalg.norm(amps) - 1.0) > NORM_TOL:
        raise MpsError("state must be normalized")
    psi = _amplitude_tensor(amps)
    n = psi.ndim
    rest = psi.reshape(-1, 2, 1)  # (left qubits, sigma_last, right bond)
    ts: list[np.ndarray] = [None] * n
    err = 0.0
    for p in range(n - 1, 0, -1):
        dr = rest.shape[2]
        m = rest.reshape(-1, 2 * dr)
        u, s, vh = np.linalg.svd(m, full_matrices=False)
        k, e = _truncate(s, chi)
        err += e
        ts[p] = vh[:k].reshape(k, 2, dr)
        rest = (u[:, :k] * s[:k]).reshape(-1, 2, k)
    first = rest.reshape(1, 2, -1)
    ts[0] = first / np.linalg.norm(first)
    return MPS(tuple(ts), right_normalized=True), err


def mps_to_dense(mps: MPS, allow_large: bool = False) -> np.ndarray:
    """Amplitudes in the statevector index convention."""
    limit = max_qubits(DENSE_MAX_QUBITS)
    if mps.n_sites > limit and not allow_large:
        raise MpsError(f"{mps.n_sites} qubits exceed the dense limit {limit} (set PSYM_MAX_QUBITS)")
    psi = mps.tensors[0].reshape(2, -1)
    for t in mps.tensors[1:]:
        psi = np.einsum("xa,asb->xsb", psi, t).reshape(-1, t.shape[2])
    n = mps.n_sites
    psi = psi.reshape((2,) * n)  # axis p is qubit p
    return psi.transpose(tuple(range(n - 1, -1, -1))).reshape(-1)


def mps_to_statevector(mps: MPS, allow_large: bool = False) -> FockState:
    if mps.n_sites % 2:
        raise MpsError(f"a fermionic state needs an even number of qubits, got {mps.n_sites}")
    return FockState(mps.n_sites // 2, mps_to_dense(mps, allow_large))


# --- canonical forms and gates -----------------------------------------------

def _shift_right(ts: list[np.ndarray], p: int) -> None:
    """Move the orthogonality center from site p to p + 1 by QR."""
    t = ts[p]
    q, r = np.linalg.qr(t.reshape(-1, t.shape[2]))
    ts[p] = q.reshape(t.shape[0], 2, -1)
    ts[p + 1] = np.einsum("ab,bsc->asc", r, ts[p + 1])


def _shift_left(ts: list[np.ndarray], p: int) -> None:
    """Move the orthogonality center from site p to p - 1 by LQ."""
    t = ts[p]
    q, r = np.linalg.qr(t.reshape(t.shape[0], -1).conj().T)
    ts[p] = q.conj().T.reshape(-1, 2, t.shape[2])
    ts[p - 1] = np.einsum("asb,bc->asc", ts[p - 1], r.conj().T)


def right_canonicalize(mps: MPS) -> tuple[MPS, float]:
    """Right-normalized copy of ``mps`` scaled to unit norm; also returns the original norm."""
    ts = list(mps.tensors)
    for p in range(len(ts) - 1, 0, -1):
        _shift_left(ts, p)
    nrm = float(np.linalg.norm(ts[0]))
    if nrm == 0:
        raise MpsError("cannot normalize the zero state")
    ts[0] = ts[0] / nrm
    return MPS(tuple(ts), right_normalized=True), nrm


def check_gate(gate: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    g = np.asarray(gate, dtype=complex)
    if g.shape != (4, 4):
        raise MpsError(f"two-qubit gate must be 4x4, got {g.shape}")
    res = float(np.max(np.abs(g.conj().T @ g - np.eye(4))))
    if res > tol:
        raise MpsError(f"gate is not unitary (residual {res:.2e})")
    return g


def _apply_two_site(ts: list[np.ndarray], p: int, gate: np.ndarray, chi: int, center_right: bool) -> float:
    a, b = ts[p], ts[p + 1]
    theta = np.einsum("asb,btc->astc", a, b)
    theta = np.einsum("STst,astc->aSTc", gate.reshape(2, 2, 2, 2), theta)
    dl, dr = theta.shape[0], theta.shape[3]
    u, s, vh = np.linalg.svd(theta.reshape(dl * 2, 2 * dr), full_matrices=False)
    k, err = _truncate(s, chi)
    if center_right:
        ts[p] = u[:, :k].reshape(dl, 2, k)
        ts[p + 1] = (s[:k, None] * vh[:k]).reshape(k, 2, dr)
    else:
        ts[p] = (u[:, :k] * s[:k]).reshape(dl, 2, k)
        ts[p + 1] = vh[:k].reshape(k, 2, dr)
    return err


def apply_gates(mps: MPS, gates, chi: int) -> tuple[MPS, float]:
    """Apply (site, 4x4 gate) pairs in order, each on sites (site, site + 1).

    The orthogonality center is moved to each gate before its SVD split, so
    every truncation is optimal for the state at that moment.  The result is
    returned in right-normalized gauge without renormalization; the discarded
    weight is returned alongside.
    """
    if chi < 1:
        raise MpsError("bond dimension must be at least 1")
    if mps.right_normalized:
        ts, scale = list(mps.tensors), 1.0
    else:
        canon, scale = right_canonicalize(mps)
        ts = list(canon.tensors)
    n = len(ts)
    center, err = 0, 0.0
    for p, gate in gates:
        if not 0 <= p < n - 1:
            raise MpsError(f"gate on sites ({p}, {p + 1}) outside a {n}-site chain")
        g = check_gate(gate)
        while center < p:
            _shift_right(ts, center)
            center += 1
        while center > p:
            _shift_left(ts, center)
            center -= 1
        err += _apply_two_site(ts, p, g, chi, center_right=True)
        center = p + 1
    while center > 0:
        _shift_left(ts, center)
        center -= 1
    ts[0] = ts[0] * scale
    normalized = abs(np.linalg.norm(ts[0]) - 1.0) < NORM_TOL
    return MPS(tuple(ts), right_normalized=normalized), err


def apply_gate_mps(mps: MPS, gate: np.ndarray, site: int, chi: int, sites: tuple[int, int] | None = None) -> MPS:
    """Apply one two-qubit gate on (site, site + 1), keeping at most ``chi`` singular values."""
    if sites is not None and (sites[1] != sites[0] + 1 or sites[0] != site):
        raise MpsError(f"gate sites {sites} are not adjacent")
    return apply_gates(mps, [(site, gate)], chi)[0]


def apply_gate_dense(amps: np.ndarray, gate: np.ndarray, site: int) -> np.ndarray:
    """Dense reference: the gate on qubits (site, site + 1) of a statevector."""
    psi = _amplitude_tensor(np.asarray(amps, dtype=complex))
    n = psi.ndim
    psi = np.moveaxis(psi, (site, site + 1), (0, 1))
    psi = np.tensordot(np.asarray(gate).reshape(2, 2, 2, 2), psi, axes=([2, 3], [0, 1]))
    psi = np.moveaxis(psi, (0, 1), (site, site + 1))
    return psi.transpose(tuple(range(n - 1, -1, -1))).reshape(-1)


# --- binary files ------------------------------------------------------------

def save_mps(mps: MPS, path: str | Path) -> None:
    """Magic b"PMPS1", u32 site count, u32 bond dims m_1..m_{N+1}, then complex128 tensors site by site."""
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack(f"<I{mps.n_sites + 1}I", mps.n_sites, *mps.bond_dims))
        for t in mps.tensors:
            f.write(np.ascontiguousarray(t, dtype="<c16").tobytes())


def load_mps(path: str | Path) -> MPS:
    raw = Path(path).read_bytes()
    if raw[:5] != MAGIC:
        raise MpsError(f"{path}: not an MPS file (bad magic)")
    (n,) = struct.unpack_from("<I", raw, 5)
    dims = struct.unpack_from(f"<{n + 1}I", raw, 9)
    off = 9 + 4 * (n + 1)
    ts = []
    for p in range(n):
        shape = (dims[p], 2, dims[p + 1])
        size = 16 * int(np.prod(shape))
        if off + size > len(raw):
            raise MpsError(f"{path}: truncated tensor data at site {p}")
        ts.append(np.frombuffer(raw[off:off + size], dtype="<c16").astype(complex).reshape(shape))
        off += size
    if off != len(raw):
        raise MpsError(f"{path}: {len(raw) - off} trailing bytes")
    mps = MPS(tuple(ts))
    return MPS(mps.tensors, right_normalized=mps.right_normalization_residual() < NORM_TOL)
