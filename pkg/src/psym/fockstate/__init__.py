"""Jordan-Wigner statevector backend."""

from .hamiltonian import (
    FciHamiltonian,
    apply_hamiltonian,
    energy,
    filter_state,
    read_fcidump,
    sector_matrix,
    write_fcidump,
)
from .io import load_state, save_state
from .state import (
    FockError,
    FockState,
    apply_diagonal_phase,
    apply_orbital_rotation,
    exterior_power,
    from_blocked_vector,
    to_blocked_vector,
)
from .symmetry import (
    apply_group_element,
    overlap_direct,
    overlap_pauli,
    overlap_ug,
    project,
    rotated_state,
    sampled_overlap,
    weights,
)
from .ucj import UcjLayer, UcjParams, apply_ucj, load_params, lucj_masks, restrict_to_lucj, save_params

__all__ = [
    "FciHamiltonian", "FockError", "FockState", "UcjLayer", "UcjParams",
    "apply_diagonal_phase", "apply_group_element", "apply_hamiltonian", "apply_orbital_rotation",
    "apply_ucj", "energy", "exterior_power", "filter_state", "from_blocked_vector", "load_params",
    "load_state", "lucj_masks", "overlap_direct", "overlap_pauli", "overlap_ug", "project",
    "read_fcidump", "restrict_to_lucj", "rotated_state", "sampled_overlap", "save_params",
    "save_state", "sector_matrix", "to_blocked_vector", "weights", "write_fcidump",
]
