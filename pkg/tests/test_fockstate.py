import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracle import random_unitary, rotate
from psym.fockstate import (
    FockError,
    FockState,
    apply_diagonal_phase,
    apply_orbital_rotation,
    exterior_power,
    from_blocked_vector,
    load_state,
    save_state,
    to_blocked_vector,
)
from psym.fockstate.io import sidecar_path
from psym.fockstate.state import determinant_index, occupations, orbital_phase_function, particle_numbers
from psym import _jsonio


def test_determinant_index_layout():
    # qubit 2*mu is orbital mu spin up, qubit 2*mu+1 spin down
    assert determinant_index(3, [0], []) == 1
    assert determinant_index(3, [], [0]) == 2
    assert determinant_index(3, [2], [1]) == (1 << 4) | (1 << 3)
    with pytest.raises(FockError):
        determinant_index(2, [2], [])
    with pytest.raises(FockError):
        determinant_index(2, [1, 1], [])


def test_particle_numbers():
    na, nb = particle_numbers(2)
    x = determinant_index(2, [0, 1], [1])
    assert (na[x], nb[x]) == (2, 1)
    assert occupations(2).shape == (16, 4)


def test_state_validation():
    with pytest.raises(FockError):
        FockState(2, np.zeros(15))
    s = FockState.from_occupations(2, [0], [1])
    with pytest.raises(ValueError):
        s.amplitudes[0] = 1.0
    assert s.sectors() == [(1, 1)]


def test_random_sector_state(rng):
    s = FockState.random(3, rng, 2, 1)
    assert s.is_normalized()
    assert s.sectors() == [(2, 1)]


def test_blocked_round_trip(rng):
    s = FockState.random(3, rng)
    back = from_blocked_vector(3, to_blocked_vector(s))
    assert np.array_equal(back.amplitudes, s.amplitudes)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2**31 - 1))
def test_orbital_rotation_matches_dense_oracle(n, seed):
    rng = np.random.default_rng(seed)
    u = random_unitary(n, rng)
    s = FockState.random(n, rng)
    expected = rotate(u, s.amplitudes)
    got = apply_orbital_rotation(s, u).amplitudes
    assert np.allclose(got, expected, atol=1e-10)


def test_rotation_is_a_representation(rng):
    a, b = random_unitary(3, rng), random_unitary(3, rng)
    s = FockState.random(3, rng)
    lhs = apply_orbital_rotation(apply_orbital_rotation(s, b), a)
    rhs = apply_orbital_rotation(s, a @ b)
    assert np.allclose(lhs.amplitudes, rhs.amplitudes, atol=1e-12)


def test_rotation_preserves_norm_and_sectors(rng):
    s = FockState.random(4, rng, 2, 2)
    r = apply_orbital_rotation(s, random_unitary(4, rng))
    assert r.norm == pytest.approx(1.0, abs=1e-12)
    assert r.sectors(1e-24) == [(2, 2)]


def test_single_spin_rotation(rng):
    u = random_unitary(2, rng)
    s = FockState.random(2, rng)
    both = apply_orbital_rotation(apply_orbital_rotation(s, u, spin="up"), u, spin="down")
    assert np.allclose(both.amplitudes, apply_orbital_rotation(s, u).amplitudes, atol=1e-12)


def test_exterior_power_of_diagonal():
    lam = exterior_power(np.diag([2.0, 3.0, 5.0]))
    assert sorted(np.round(np.diag(lam).real, 12)) == [1, 2, 3, 5, 6, 10, 15, 30]


def test_non_unitary_rotation_rejected():
    with pytest.raises(FockError):
        apply_orbital_rotation(FockState.zeros(2), np.ones((2, 2)))


def test_diagonal_phase_of_rotation(rng):
    phases = rng.uniform(-np.pi, np.pi, 3)
    s = FockState.random(3, rng)
    a = apply_orbital_rotation(s, np.diag(np.exp(1j * phases)))
    b = apply_diagonal_phase(s, orbital_phase_function(3, phases))
    assert np.allclose(a.amplitudes, b.amplitudes, atol=1e-12)


def test_wavefunction_file_round_trip(tmp_path, rng):
    s = FockState.random(3, rng, 1, 2)
    for ordering in ("interleaved", "blocked"):
        path = tmp_path / f"{ordering}.psym"
        save_state(s, path, ordering=ordering)
        back = load_state(path)
        assert np.array_equal(back.amplitudes, s.amplitudes)
        meta = _jsonio.load(sidecar_path(path))
        assert (meta["n_alpha"], meta["n_beta"]) == (1, 2)
        assert meta["norm"] == pytest.approx(1.0)
    raw = path.read_bytes()
    assert raw[:5] == b"PSYM1" and raw[9] == 1


def test_wavefunction_file_errors(tmp_path):
    bad = tmp_path / "bad.psym"
    bad.write_bytes(b"NOPE!" + bytes(20))
    with pytest.raises(FockError):
        load_state(bad)
    short = tmp_path / "short.psym"
    short.write_bytes(b"PSYM1" + (2).to_bytes(4, "little") + b"\x00" + bytes(16))
    with pytest.raises(FockError):
        load_state(short)


def test_mixed_sector_sidecar_has_no_particle_numbers(tmp_path, rng):
    s = FockState.random(2, rng)
    save_state(s, tmp_path / "m.psym")
    assert "n_alpha" not in _jsonio.load(sidecar_path(tmp_path / "m.psym"))
