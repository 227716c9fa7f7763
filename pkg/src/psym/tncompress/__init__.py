"""MPS tools and brick-wall circuit compression."""

from .circuit import (
    BrickWallCircuit,
    circuit_state,
    circuit_statevector,
    gate_site,
    gates_in_layer,
    infidelity,
    load_circuit,
    save_circuit,
)
from .compress import CompressConfig, CompressResult, compress, environment, svd_update
from .mps import (
    MPS,
    MpsError,
    apply_gate_mps,
    apply_gates,
    load_mps,
    mps_from_statevector,
    mps_to_dense,
    mps_to_statevector,
    save_mps,
)

__all__ = [
    "MPS", "BrickWallCircuit", "CompressConfig", "CompressResult", "MpsError",
    "apply_gate_mps", "apply_gates", "circuit_state", "circuit_statevector", "compress", "environment",
    "gate_site", "gates_in_layer", "infidelity", "load_circuit", "load_mps", "mps_from_statevector",
    "mps_to_dense", "mps_to_statevector", "save_circuit", "save_mps", "svd_update",
]
