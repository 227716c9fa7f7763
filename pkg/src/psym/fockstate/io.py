"""Binary wavefunction files with a JSON sidecar.

Layout: b"PSYM1", n_spatial as little-endian u32, one ordering byte
(0 interleaved, 1 blocked), then 4^n (re, im) little-endian float64 pairs.
The sidecar ``<path>.json`` holds the norm and, for single-sector states,
the particle numbers.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .. import _jsonio
from .state import FockError, FockState, from_blocked_vector, to_blocked_vector

MAGIC = b"PSYM1"
ORDERINGS = {"interleaved": 0, "blocked": 1}


def sidecar_path(path: str | Path) -> Path:
    return Path(str(path) + ".json")


def save_state(state: FockState, path: str | Path, ordering: str = "interleaved") -> None:
    if ordering not in ORDERINGS:
        raise FockError(f"unknown ordering {ordering!r}; expected one of {list(ORDERINGS)}")
    amps = state.amplitudes if ordering == "interleaved" else to_blocked_vector(state)
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<IB", state.n_spatial, ORDERINGS[ordering]))
        f.write(np.ascontiguousarray(amps, dtype="<c16").tobytes())
    meta: dict = {"norm": state.norm}
    sectors = state.sectors()
    if len(sectors) == 1:
        meta["n_alpha"], meta["n_beta"] = sectors[0]
    _jsonio.dump(meta, sidecar_path(path))


def load_state(path: str | Path) -> FockState:
    raw = Path(path).read_bytes()
    if raw[:5] != MAGIC:
        raise FockError(f"{path}: not a wavefunction file (bad magic)")
    n, tag = struct.unpack_from("<IB", raw, 5)
    body = raw[10:]
    if len(body) != 16 * 4**n:
        raise FockError(f"{path}: expected {16 * 4**n} bytes of amplitudes, found {len(body)}")
    amps = np.frombuffer(body, dtype="<c16").astype(complex)
    if tag == 0:
        return FockState(n, amps)
    if tag == 1:
        return from_blocked_vector(n, amps)
    raise FockError(f"{path}: unknown ordering tag {tag}")
