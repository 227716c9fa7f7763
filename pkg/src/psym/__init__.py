"""Point-group symmetry analysis of fermionic wavefunctions.

Irrep weights from overlaps <Psi|U(g)|Psi>, symmetry projection and energy
filtering on Jordan-Wigner statevectors, determinant shortcuts for single
Slater determinants, and brick-wall circuit compression of MPS states.
"""

from .pointgroup import (
    CharacterTable,
    GroupError,
    PointGroup,
    WeightReport,
    builtin_group,
    descend,
    load_group,
    reduce_representation,
    validate_table,
    weights_from_overlaps,
)
from .representation import RepSet, diagonalize, from_basis_overlap, load_rep, pauli_shortcut, save_rep
from .slater import SlaterDeterminant, enumerate_single_excitations, overlap_det, reduce_manifold, weights_sd
from .huckel import HuckelModel

__all__ = [
    "CharacterTable", "GroupError", "HuckelModel", "PointGroup", "RepSet", "SlaterDeterminant", "WeightReport",
    "builtin_group", "descend", "diagonalize", "enumerate_single_excitations", "from_basis_overlap",
    "load_group", "load_rep", "overlap_det", "pauli_shortcut", "reduce_manifold", "reduce_representation",
    "save_rep", "validate_table", "weights_from_overlaps", "weights_sd",
]
