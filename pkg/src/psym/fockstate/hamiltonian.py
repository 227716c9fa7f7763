"""Spin-free molecular Hamiltonians, FCIDUMP files, energies and the exact energy filter."""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np
import scipy.sparse

from .state import FockError, FockState, particle_numbers

FILTER_MAX_QUBITS = 16


@dataclass(frozen=True)
class FciHamiltonian:
    """H = core + sum h_pq E_pq + 1/2 sum (pq|rs) (E_pq E_rs - delta_qr E_ps), chemists' notation."""

    n_spatial: int
    core: float
    h1: np.ndarray = field(repr=False)
    eri: np.ndarray = field(repr=False)
    n_electrons: int | None = None
    ms2: int = 0
    orbsym: tuple[int, ...] | None = None

    def __post_init__(self):
        n = self.n_spatial
        h1 = np.array(self.h1, dtype=float)
        eri = np.array(self.eri, dtype=float) if self.eri is not None else np.zeros((n,) * 4)
        if h1.shape != (n, n) or eri.shape != (n,) * 4:
            raise FockError(f"integral shapes {h1.shape}, {eri.shape} do not match n_spatial={n}")
        if np.max(np.abs(h1 - h1.T), initial=0.0) > 1e-10:
            raise FockError("one-electron integrals are not symmetric")
        for perm in ((1, 0, 2, 3), (0, 1, 3, 2), (2, 3, 0, 1)):
            if np.max(np.abs(eri - eri.transpose(perm)), initial=0.0) > 1e-10:
                raise FockError(f"two-electron integrals lack the symmetry {perm}")
        h1 = 0.5 * (h1 + h1.T)
        eri = _symmetrize8(eri)
        h1.flags.writeable = False
        eri.flags.writeable = False
        object.__setattr__(self, "h1", h1)
        object.__setattr__(self, "eri", eri)
        object.__setattr__(self, "core", float(self.core))

    @property
    def effective_h1(self) -> np.ndarray:
        """h_ps - 1/2 sum_q (pq|qs), the one-body part once E_pq E_rs is written out."""
        return self.h1 - 0.5 * np.einsum("pqqs->ps", self.eri)


def _symmetrize8(eri: np.ndarray) -> np.ndarray:
    e = 0.5 * (eri + eri.transpose(1, 0, 2, 3))
    e = 0.5 * (e + e.transpose(0, 1, 3, 2))
    return 0.5 * (e + e.transpose(2, 3, 0, 1))


# --- FCIDUMP ---------------------------------------------------------------

_HEADER_END = re.compile(r"&END|^\s*/\s*$", re.IGNORECASE | re.MULTILINE)


def read_fcidump(path: str | Path) -> FciHamiltonian:
    """Read a Molpro FCIDUMP file; integrals are expanded to full 8-fold symmetry."""
    text = Path(path).read_text()
    m = _HEADER_END.search(text)
    if not text.lstrip().upper().startswith("&FCI") or m is None:
        raise FockError(f"{path}: not an FCIDUMP file (missing &FCI ... &END header)")
    header, body = text[: m.start()], text[m.end():]
    fields = _parse_namelist(header)
    try:
        n = int(fields["NORB"][0])
    except KeyError:
        raise FockError(f"{path}: header lacks NORB") from None
    nelec = int(fields["NELEC"][0]) if "NELEC" in fields else None
    ms2 = int(fields.get("MS2", [0])[0])
    orbsym = tuple(int(v) for v in fields["ORBSYM"]) if "ORBSYM" in fields else None
    h1 = np.zeros((n, n))
    eri = np.zeros((n, n, n, n))
    core = 0.0
    for lineno, line in enumerate(body.splitlines(), 1):
        parts = line.replace(",", " ").split()
        if not parts:
            continue
        if len(parts) != 5:
            raise FockError(f"{path}: malformed integral line {lineno}: {line!r}")
        value = float(parts[0].replace("D", "E").replace("d", "e"))
        i, j, k, l = (int(p) for p in parts[1:])
        if max(i, j, k, l) > n or min(i, j, k, l) < 0:
            raise FockError(f"{path}: index out of range on line {lineno}: {line!r}")
        if i == j == k == l == 0:
            core = value
        elif k == 0 and l == 0:
            if j == 0:
                continue  # orbital energy line
            h1[i - 1, j - 1] = h1[j - 1, i - 1] = value
        else:
            i, j, k, l = i - 1, j - 1, k - 1, l - 1
            for a, b, c, d in ((i, j, k, l), (j, i, k, l), (i, j, l, k), (j, i, l, k)):
                eri[a, b, c, d] = eri[c, d, a, b] = value
    return FciHamiltonian(n, core, h1, eri, n_electrons=nelec, ms2=ms2, orbsym=orbsym)


def _parse_namelist(header: str) -> dict[str, list[str]]:
    body = re.sub(r"^\s*&FCI", "", header.strip(), flags=re.IGNORECASE)
    fields: dict[str, list[str]] = {}
    for key, values in re.findall(r"([A-Za-z_][A-Za-z0-9_]*)\s*=\s*([^=]*?)(?=[A-Za-z_][A-Za-z0-9_]*\s*=|$)", body, re.S):
        fields[key.upper()] = [v for v in re.split(r"[\s,]+", values.strip()) if v]
    return fields


def write_fcidump(ham: FciHamiltonian, path: str | Path, n_electrons: int | None = None, tol: float = 1e-14) -> None:
    n = ham.n_spatial
    nelec = n_electrons if n_electrons is not None else ham.n_electrons
    if nelec is None:
        raise FockError("NELEC is required to write an FCIDUMP file")
    orbsym = ham.orbsym or (1,) * n
    lines = [
        f"&FCI NORB={n},NELEC={nelec},MS2={ham.ms2},",
        "  ORBSYM=" + ",".join(str(s) for s in orbsym) + ",",
        "  ISYM=1,",
        "&END",
    ]
    fmt = "{:23.16e} {:4d} {:4d} {:4d} {:4d}"
    for i in range(n):
        for j in range(i + 1):
            ij = i * (i + 1) // 2 + j
            for k in range(n):
                for l in range(k + 1):
                    if k * (k + 1) // 2 + l > ij:
                        continue
                    v = ham.eri[i, j, k, l]
                    if abs(v) > tol:
                        lines.append(fmt.format(v, i + 1, j + 1, k + 1, l + 1))
    for i in range(n):
        for j in range(i + 1):
            if abs(ham.h1[i, j]) > tol:
                lines.append(fmt.format(ham.h1[i, j], i + 1, j + 1, 0, 0))
    lines.append(fmt.format(ham.core, 0, 0, 0, 0))
    Path(path).write_text("\n".join(lines) + "\n")


# --- one-body excitation operators ----------------------------------------

@lru_cache(maxsize=None)
def _hop(n_spatial: int, p: int, q: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Source indices, target indices and signs of a_p^dagger a_q for spin orbitals p, q."""
    x = np.arange(4**n_spatial)
    if p == q:
        src = x[(x >> q) & 1 == 1]
        out = (src, src, np.ones(len(src)))
    else:
        src = x[((x >> q) & 1 == 1) & ((x >> p) & 1 == 0)]
        mid = src ^ (1 << q)
        dst = mid | (1 << p)
        parity = np.bitwise_count(src & ((1 << q) - 1)) + np.bitwise_count(mid & ((1 << p) - 1))
        out = (src, dst, np.where(parity % 2 == 0, 1.0, -1.0))
    for a in out:
        a.flags.writeable = False
    return out


def apply_excitation(vec: np.ndarray, n_spatial: int, p: int, q: int) -> np.ndarray:
    """E_pq vec = sum_sigma a^dagger_{p sigma} a_{q sigma} vec for spatial orbitals p, q."""
    out = np.zeros_like(vec, dtype=complex)
    for s in (0, 1):
        src, dst, sign = _hop(n_spatial, 2 * p + s, 2 * q + s)
        out[dst] += sign * vec[src]
    return out


def _check_dims(state: FockState, ham: FciHamiltonian) -> None:
    if state.n_spatial != ham.n_spatial:
        raise FockError(f"state has {state.n_spatial} spatial orbitals, Hamiltonian {ham.n_spatial}")


def apply_hamiltonian(state: FockState, ham: FciHamiltonian) -> FockState:
    _check_dims(state, ham)
    n = ham.n_spatial
    psi = state.amplitudes
    phi = {(r, s): apply_excitation(psi, n, r, s) for r in range(n) for s in range(n)}
    k = ham.effective_h1
    out = ham.core * psi.astype(complex)
    for (p, s), v in phi.items():
        if k[p, s] != 0:
            out += k[p, s] * v
    for p in range(n):
        for q in range(n):
            w = ham.eri[p, q]
            if not np.any(w):
                continue
            chi = sum(w[r, s] * phi[(r, s)] for r in range(n) for s in range(n) if w[r, s] != 0)
            out += 0.5 * apply_excitation(chi, n, p, q)
    return FockState(n, out)


def energy(state: FockState, ham: FciHamiltonian) -> float:
    """<Psi|H|Psi> (not divided by <Psi|Psi>)."""
    _check_dims(state, ham)
    n = ham.n_spatial
    psi = state.amplitudes
    phi = np.array([apply_excitation(psi, n, p, q) for p in range(n) for q in range(n)])
    one = phi @ psi.conj()  # <psi|E_pq psi>, index p*n + q
    gram = phi.conj() @ phi.T  # <E_pq psi|E_rs psi>
    # <psi|E_pq E_rs|psi> = <E_qp psi|E_rs psi>
    swap = np.arange(n * n).reshape(n, n).T.reshape(-1)
    two = gram[swap]
    e = ham.core * np.vdot(psi, psi)
    e += ham.effective_h1.reshape(-1) @ one
    e += 0.5 * ham.eri.reshape(n * n, n * n).ravel() @ two.ravel()
    if abs(e.imag) > 1e-8 * max(1.0, abs(e.real)):
        raise FockError(f"energy has imaginary part {e.imag:.3e}; Hamiltonian not Hermitian?")
    return float(e.real)


def sector_indices(n_spatial: int, n_alpha: int, n_beta: int) -> np.ndarray:
    na, nb = particle_numbers(n_spatial)
    return np.flatnonzero((na == n_alpha) & (nb == n_beta))


def sector_matrix(ham: FciHamiltonian, n_alpha: int, n_beta: int) -> scipy.sparse.csr_matrix:
    """Sparse matrix of H restricted to a fixed (n_alpha, n_beta) sector."""
    n = ham.n_spatial
    basis = sector_indices(n, n_alpha, n_beta)
    local = np.full(4**n, -1)
    local[basis] = np.arange(len(basis))
    dim = len(basis)
    ops = {}
    for p in range(n):
        for q in range(n):
            rows, cols, vals = [], [], []
            for s in (0, 1):
                src, dst, sign = _hop(n, 2 * p + s, 2 * q + s)
                keep = local[src] >= 0
                rows.append(local[dst[keep]])
                cols.append(local[src[keep]])
                vals.append(sign[keep])
            ops[(p, q)] = scipy.sparse.csr_matrix(
                (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(dim, dim)
            )
    k = ham.effective_h1
    h = ham.core * scipy.sparse.identity(dim, format="csr")
    for (p, q), e in ops.items():
        if k[p, q] != 0:
            h = h + k[p, q] * e
    for (p, q), e in ops.items():
        w = ham.eri[p, q]
        if not np.any(w):
            continue
        inner = sum(w[r, s] * ops[(r, s)] for r in range(n) for s in range(n) if w[r, s] != 0)
        h = h + 0.5 * (e @ inner)
    return h.tocsr()


def max_qubits(default: int) -> int:
    env = os.environ.get("PSYM_MAX_QUBITS")
    return int(env) if env else default


def filter_state(
    state: FockState,
    ham: FciHamiltonian,
    cutoff: float,
    allow_large: bool = False,
) -> FockState:
    """Theta(H - cutoff)|Psi>: keep eigencomponents with energy strictly below ``cutoff``.

    Each particle-number sector present in the state is diagonalized densely.
    """
    _check_dims(state, ham)
    limit = max_qubits(FILTER_MAX_QUBITS)
    if 2 * ham.n_spatial > limit and not allow_large:
        raise FockError(
            f"filter needs dense diagonalization on {2 * ham.n_spatial} qubits (limit {limit}); "
            "pass allow_large=True or set PSYM_MAX_QUBITS"
        )
    out = np.zeros(4**ham.n_spatial, dtype=complex)
    for na, nb in state.sectors():
        idx = sector_indices(ham.n_spatial, na, nb)
        h = sector_matrix(ham, na, nb).toarray()
        evals, evecs = np.linalg.eigh(h)
        keep = evals < cutoff
        if not np.any(keep):
            continue
        v = evecs[:, keep]
        out[idx] = v @ (v.conj().T @ state.amplitudes[idx])
    return FockState(ham.n_spatial, out)
