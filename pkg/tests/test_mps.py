import numpy as np
import pytest
from scipy.stats import unitary_group

from psym.fockstate import FockState
from psym.tncompress import (
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
from psym.tncompress.mps import apply_gate_dense, right_canonicalize

SWAP = np.eye(4)[[0, 2, 1, 3]]


def random_vector(n_qubits, rng):
    v = rng.standard_normal(2**n_qubits) + 1j * rng.standard_normal(2**n_qubits)
    return v / np.linalg.norm(v)


def test_product_state_has_unit_bonds():
    v = np.zeros(64, dtype=complex)
    v[0b101100] = 1.0
    mps, err = mps_from_statevector(v, 8)
    assert mps.bond_dims == [1] * 7 and err == 0.0
    assert np.allclose(mps_to_dense(mps), v)
    assert np.allclose(mps_to_dense(MPS.product([0, 0, 1, 1, 0, 1])), v)


def test_bell_pair_has_bond_two():
    v = np.zeros(16, dtype=complex)
    v[0b0000] = v[0b0110] = 1 / np.sqrt(2)  # qubits 1 and 2 entangled
    mps, _ = mps_from_statevector(v, 4)
    assert mps.bond_dims == [1, 1, 2, 1, 1]


def test_lossless_round_trip(rng):
    v = random_vector(10, rng)
    mps, err = mps_from_statevector(v, 64)
    assert err < 1e-24
    assert np.allclose(mps_to_dense(mps), v, atol=1e-12)
    assert mps.right_normalization_residual() < 1e-12
    assert mps.norm == pytest.approx(1.0)


def test_truncation_error_is_discarded_weight(rng):
    v = random_vector(8, rng)
    mps, err = mps_from_statevector(v, 2)
    assert 0 < err < 1
    assert max(mps.bond_dims) == 2
    assert abs(mps.inner(mps_from_statevector(v, 16)[0])) ** 2 <= 1 + 1e-12


def test_statevector_conversion(rng):
    s = FockState.random(3, rng)
    mps, _ = mps_from_statevector(s, 64)
    assert np.allclose(mps_to_statevector(mps).amplitudes, s.amplitudes, atol=1e-12)
    with pytest.raises(MpsError):
        mps_to_statevector(MPS.vacuum(3))


def test_identity_and_swap_gates(rng):
    v = random_vector(6, rng)
    mps, _ = mps_from_statevector(v, 64)
    assert np.allclose(mps_to_dense(apply_gate_mps(mps, np.eye(4), 2, 64)), v, atol=1e-12)
    swapped = mps_to_dense(apply_gate_mps(mps, SWAP, 2, 64))
    idx = np.arange(64)
    b2, b3 = (idx >> 2) & 1, (idx >> 3) & 1
    perm = idx ^ ((b2 ^ b3) << 2) ^ ((b2 ^ b3) << 3)
    assert np.allclose(swapped, v[perm], atol=1e-12)


def test_gate_sequence_matches_dense(rng):
    v = random_vector(8, rng)
    mps, _ = mps_from_statevector(v, 64)
    gates = [(p, unitary_group.rvs(4, random_state=rng)) for p in [0, 3, 6, 1, 5, 2]]
    out, err = apply_gates(mps, gates, 64)
    for p, g in gates:
        v = apply_gate_dense(v, g, p)
    assert err < 1e-24
    assert np.allclose(mps_to_dense(out), v, atol=1e-12)
    assert out.right_normalization_residual() < 1e-12


def test_gate_errors(rng):
    mps = MPS.vacuum(4)
    with pytest.raises(MpsError):
        apply_gate_mps(mps, np.ones((4, 4)), 0, 4)
    with pytest.raises(MpsError):
        apply_gate_mps(mps, np.eye(4), 3, 4)
    with pytest.raises(MpsError):
        apply_gate_mps(mps, np.eye(4), 0, 4, sites=(0, 2))


def test_right_canonicalize_returns_norm(rng):
    m = MPS.random(6, 3, rng)
    scaled = MPS(tuple(t * (2.0 if p == 2 else 1.0) for p, t in enumerate(m.tensors)))
    canon, nrm = right_canonicalize(scaled)
    assert nrm == pytest.approx(2.0)
    assert canon.right_normalization_residual() < 1e-12


def test_binary_round_trip(tmp_path, rng):
    m = MPS.random(6, 4, rng)
    path = tmp_path / "t.pmps"
    save_mps(m, path)
    back = load_mps(path)
    assert back.bond_dims == m.bond_dims and back.right_normalized
    for a, b in zip(m.tensors, back.tensors):
        assert np.array_equal(a, b)
    assert path.read_bytes()[:5] == b"PMPS1"
    path.write_bytes(path.read_bytes()[:-8])
    with pytest.raises(MpsError):
        load_mps(path)


def test_dense_guard(monkeypatch):
    monkeypatch.setenv("PSYM_MAX_QUBITS", "4")
    with pytest.raises(MpsError):
        mps_to_dense(MPS.vacuum(6))
    assert mps_to_dense(MPS.vacuum(6), allow_large=True)[0] == 1
