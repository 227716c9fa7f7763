"""Unitary cluster Jastrow states: prod_r U_r exp(i J_r) U_r^dagger |Psi_0>."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import _jsonio
from .state import FockError, FockState, apply_diagonal_phase, apply_orbital_rotation, check_unitary, occupations


@dataclass(frozen=True)
class UcjLayer:
    U: np.ndarray = field(repr=False)
    J_same: np.ndarray = field(repr=False)
    J_anti: np.ndarray = field(repr=False)

    def __post_init__(self):
        u = np.array(self.U, dtype=complex)
        n = u.shape[0]
        check_unitary(u, n)
        js = np.array(self.J_same, dtype=float)
        ja = np.array(self.J_anti, dtype=float)
        for name, j in (("J_same", js), ("J_anti", ja)):
            if j.shape != (n, n):
                raise FockError(f"{name} has shape {j.shape}, expected {(n, n)}")
            if not np.allclose(j, j.T, atol=1e-12):
                raise FockError(f"{name} is not symmetric")
        object.__setattr__(self, "U", u)
        object.__setattr__(self, "J_same", js)
        object.__setattr__(self, "J_anti", ja)


@dataclass(frozen=True)
class UcjParams:
    layers: tuple[UcjLayer, ...]

    @property
    def repetitions(self) -> int:
        return len(self.layers)

    @property
    def n_spatial(self) -> int:
        return self.layers[0].U.shape[0]


def lucj_masks(n_spatial: int) -> tuple[np.ndarray, np.ndarray]:
    """Allowed entries for heavy-hex connectivity.

    Same spin: nearest neighbours (p, p+1).  Opposite spin: diagonal (p, p)
    for p = 1, 5, 9, ... (1-based).
    """
    same = np.zeros((n_spatial, n_spatial), dtype=bool)
    for p in range(n_spatial - 1):
        same[p, p + 1] = same[p + 1, p] = True
    anti = np.zeros((n_spatial, n_spatial), dtype=bool)
    for p in range(0, n_spatial, 4):
        anti[p, p] = True
    return same, anti


def restrict_to_lucj(params: UcjParams) -> UcjParams:
    same, anti = lucj_masks(params.n_spatial)
    return UcjParams(
        tuple(UcjLayer(l.U, np.where(same, l.J_same, 0.0), np.where(anti, l.J_anti, 0.0)) for l in params.layers)
    )


def jastrow_phase(n_spatial: int, j_same: np.ndarray, j_anti: np.ndarray) -> np.ndarray:
    """(1/2) sum_{sigma sigma'} sum_{mu nu} J_{mu nu} n_{mu sigma} n_{nu sigma'} per basis state.

    Opposite-spin blocks use J_anti for up-down and its transpose for down-up.
    """
    occ = occupations(n_spatial).astype(float)
    up, dn = occ[:, 0::2], occ[:, 1::2]
    same = np.einsum("xm,mn,xn->x", up, j_same, up) + np.einsum("xm,mn,xn->x", dn, j_same, dn)
    cross = np.einsum("xm,mn,xn->x", up, j_anti, dn)
    return 0.5 * same + cross


def apply_ucj(reference: FockState, params: UcjParams) -> FockState:
    """Apply the layers right to left: the last layer acts on the reference first."""
    if params.n_spatial != reference.n_spatial:
        raise FockError(f"UCJ parameters are for {params.n_spatial} orbitals, state has {reference.n_spatial}")
    state = reference
    for layer in reversed(params.layers):
        state = apply_orbital_rotation(state, layer.U.conj().T)
        state = apply_diagonal_phase(state, jastrow_phase(reference.n_spatial, layer.J_same, layer.J_anti))
        state = apply_orbital_rotation(state, layer.U)
    return state


def params_to_json(params: UcjParams) -> dict:
    return {
        "R": params.repetitions,
        "reps": [
            {"U": _jsonio.encode_complex(l.U), "J_same": l.J_same.tolist(), "J_anti": l.J_anti.tolist()}
            for l in params.layers
        ],
    }


def params_from_json(data: dict) -> UcjParams:
    try:
        layers = tuple(
            UcjLayer(_jsonio.decode_complex(r["U"], 2), np.asarray(r["J_same"], float), np.asarray(r["J_anti"], float))
            for r in data["reps"]
        )
    except KeyError as exc:
        raise FockError(f"malformed UCJ parameter file: missing {exc}") from exc
    if "R" in data and int(data["R"]) != len(layers):
        raise FockError(f"UCJ file declares R={data['R']} but has {len(layers)} repetitions")
    if not layers:
        raise FockError("UCJ parameter file has no repetitions")
    return UcjParams(layers)


def save_params(params: UcjParams, path: str | Path) -> None:
    _jsonio.dump(params_to_json(params), path)


def load_params(path: str | Path) -> UcjParams:
    return params_from_json(_jsonio.load(path))
