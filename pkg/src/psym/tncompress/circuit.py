"""Brick-wall circuits of two-qubit unitaries.

Layers and gates are 0-based in code.  Layer li (layer l = li + 1) gate b acts
on qubits (2b, 2b + 1) when li is even and (2b + 1, 2b + 2) when li is odd,
i.e. (2b - 2, 2b - 1) for odd l and (2b - 1, 2b) for even l with 1-based b.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.stats import unitary_group

from .. import _jsonio
from .mps import MPS, MpsError, apply_gate_dense, apply_gates, check_gate, mps_to_dense


def gates_in_layer(n_spatial: int, li: int) -> int:
    """n for odd layers (1-based), n - 1 for even ones."""
    return n_spatial if li % 2 == 0 else n_spatial - 1


def gate_site(li: int, b: int) -> int:
    """Lower qubit of gate b in layer li."""
    return 2 * b + (li % 2)


@dataclass(frozen=True)
class BrickWallCircuit:
    n_spatial: int
    layers: tuple[tuple[np.ndarray, ...], ...] = field(repr=False)

    def __post_init__(self):
        if self.n_spatial < 1:
            raise MpsError("a brick-wall circuit needs n_spatial >= 1")
        layers = tuple(tuple(check_gate(g) for g in layer) for layer in self.layers)
        for li, layer in enumerate(layers):
            want = gates_in_layer(self.n_spatial, li)
            if len(layer) != want:
                raise MpsError(f"layer {li + 1} has {len(layer)} gates, expected {want}")
        object.__setattr__(self, "layers", layers)

    @property
    def n_qubits(self) -> int:
        return 2 * self.n_spatial

    @property
    def depth(self) -> int:
        return len(self.layers)

    def placed(self, li: int, adjoint: bool = False) -> list[tuple[int, np.ndarray]]:
        return [(gate_site(li, b), g.conj().T if adjoint else g) for b, g in enumerate(self.layers[li])]

    def with_gate(self, li: int, b: int, gate: np.ndarray) -> "BrickWallCircuit":
        layers = [list(layer) for layer in self.layers]
        layers[li][b] = gate
        return BrickWallCircuit(self.n_spatial, tuple(tuple(layer) for layer in layers))

    @classmethod
    def identity(cls, n_spatial: int, depth: int) -> "BrickWallCircuit":
        return cls(n_spatial, tuple(
            tuple(np.eye(4, dtype=complex) for _ in range(gates_in_layer(n_spatial, li))) for li in range(depth)
        ))

    @classmethod
    def haar(cls, n_spatial: int, depth: int, rng: np.random.Generator) -> "BrickWallCircuit":
        return cls(n_spatial, tuple(
            tuple(unitary_group.rvs(4, random_state=rng) for _ in range(gates_in_layer(n_spatial, li)))
            for li in range(depth)
        ))


def apply_layers(mps: MPS, circuit: BrickWallCircuit, layer_ids, chi: int, adjoint: bool = False) -> tuple[MPS, float]:
    gates = [pg for li in layer_ids for pg in circuit.placed(li, adjoint)]
    return apply_gates(mps, gates, chi)


def circuit_state(circuit: BrickWallCircuit, chi: int) -> tuple[MPS, float]:
    """The circuit applied to |0...0> as an MPS with bond cap ``chi``, plus the discarded weight."""
    return apply_layers(MPS.vacuum(circuit.n_qubits), circuit, range(circuit.depth), chi)


def circuit_statevector(circuit: BrickWallCircuit) -> np.ndarray:
    """Dense reference for the circuit applied to |0...0>."""
    amps = np.zeros(2**circuit.n_qubits, dtype=complex)
    amps[0] = 1.0
    for li in range(circuit.depth):
        for site, g in circuit.placed(li):
            amps = apply_gate_dense(amps, g, site)
    return amps


def infidelity(target: MPS, circuit: BrickWallCircuit, chi: int = 256) -> float:
    """1 - |<target|C|0>|^2 with the circuit state contracted at bond cap ``chi``."""
    if target.n_sites != circuit.n_qubits:
        raise MpsError(f"target has {target.n_sites} qubits, circuit {circuit.n_qubits}")
    state, _ = circuit_state(circuit, chi)
    return 1.0 - abs(target.inner(state)) ** 2


def dense_infidelity(target: MPS, circuit: BrickWallCircuit) -> float:
    return 1.0 - abs(np.vdot(mps_to_dense(target), circuit_statevector(circuit))) ** 2


def circuit_to_json(circuit: BrickWallCircuit) -> dict:
    return {
        "n_qubits": circuit.n_qubits,
        "layers": [[_jsonio.encode_complex(g) for g in layer] for layer in circuit.layers],
    }


def circuit_from_json(data: dict) -> BrickWallCircuit:
    try:
        nq = int(data["n_qubits"])
        layers = tuple(tuple(_jsonio.decode_complex(g, 2) for g in layer) for layer in data["layers"])
    except (KeyError, TypeError, ValueError) as exc:
        raise MpsError(f"malformed circuit file: {exc}") from exc
    if nq % 2:
        raise MpsError(f"circuit files need an even qubit count, got {nq}")
    return BrickWallCircuit(nq // 2, layers)


def save_circuit(circuit: BrickWallCircuit, path: str | Path) -> None:
    _jsonio.dump(circuit_to_json(circuit), path)


def load_circuit(path: str | Path) -> BrickWallCircuit:
    return circuit_from_json(_jsonio.load(path))
