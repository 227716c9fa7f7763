import numpy as np
import pytest

from psym.huckel import HuckelModel, bloch_orbitals, site_positions
from psym.pointgroup import GroupError
from psym.representation import pauli_shortcut, validate


@pytest.mark.parametrize("n", [4, 6, 8, 10, 12])
def test_ring_energies(n):
    m = HuckelModel(n, alpha=0.5, beta=-1.0, group_name="D2h")
    expected = np.sort([0.5 - 2.0 * np.cos(2 * np.pi * k / n) for k in range(n)])
    assert np.allclose(m.energies, expected, atol=1e-12)
    c = m.coefficients
    assert np.allclose(c.T @ c, np.eye(n), atol=1e-12)
    h = 0.5 * np.eye(n) - (np.roll(np.eye(n), 1, 0) + np.roll(np.eye(n), -1, 0))
    assert np.allclose(c.T @ h @ c, np.diag(m.energies), atol=1e-12)


@pytest.mark.parametrize("n", [4, 6, 8, 10, 12])
def test_d2h_shells_are_abelian(n):
    m = HuckelModel(n, group_name="D2h")
    assert all(s.size == 1 for s in m.rep.shells)
    assert pauli_shortcut(m.rep) is not None
    assert validate(m.rep, m.group) == []


def test_benzene_shells(benzene):
    assert [s.label for s in benzene.rep.shells] == ["a2u", "e1g", "e2u", "b2g"]
    assert benzene.shell_orbitals("e1g") == (1, 2)
    assert np.allclose(benzene.energies, [-2, -1, -1, 1, 1, 2])


def test_hf_determinant(benzene):
    hf = benzene.hf_determinant()
    assert hf.up == hf.down == (0, 1, 2)


def test_sites_on_unit_circle():
    pos = site_positions(6)
    assert np.allclose(np.linalg.norm(pos[:, :2], axis=1), 1.0)
    assert np.allclose(pos[0, :2], [0.0, 1.0], atol=1e-12)


def test_bloch_orbitals_are_orthonormal():
    x, e = bloch_orbitals(8)
    assert np.allclose(x.T @ x, np.eye(8), atol=1e-12)
    assert np.all(np.diff(e) >= -1e-12)


def test_hubbard_integrals(benzene):
    m = HuckelModel(hubbard_u=3.0)
    eri = m.hamiltonian().eri
    x = m.coefficients
    assert eri[0, 0, 0, 0] == pytest.approx(3.0 * np.sum(x[:, 0] ** 4))


@pytest.mark.parametrize(
    "kwargs",
    [dict(n_sites=5), dict(n_sites=14), dict(n_sites=8, group_name="D6h"), dict(group_name="C2v"), dict(n_electrons=5)],
)
def test_invalid_models(kwargs):
    with pytest.raises(GroupError):
        HuckelModel(**kwargs)


def test_unknown_shell_label(benzene):
    with pytest.raises(GroupError):
        benzene.shell_orbitals("t1u")
