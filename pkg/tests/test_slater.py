import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psym.fockstate import FockState, overlap_ug, weights
from psym.representation import diagonalize
from psym.slater import (
    SlaterDeterminant,
    SlaterError,
    dets_from_json,
    enumerate_single_excitations,
    load_dets,
    overlap_det,
    reduce_manifold,
    save_dets,
    weights_sd,
)
from psym import _jsonio

subsets = st.lists(st.integers(0, 5), unique=True, max_size=6).map(sorted)


@settings(max_examples=30, deadline=None)
@given(subsets, subsets)
def test_determinant_overlap_matches_fock_path(benzene, up, down):
    sd = SlaterDeterminant(6, tuple(up), tuple(down))
    state = FockState.from_occupations(6, up, down)
    eig = diagonalize(benzene.rep)
    for g in ["C6", "C2'(0)", "sigma_h", "S3"]:
        ov = overlap_det(sd, benzene.rep, g)
        assert abs(ov) <= 1 + 1e-12
        assert ov == pytest.approx(overlap_ug(state, benzene.rep, eig, g), abs=1e-10)


def test_hf_is_totally_symmetric(benzene):
    rep = weights_sd(benzene.hf_determinant(), benzene.group, benzene.rep)
    assert rep.weights["A1g"] == pytest.approx(1.0, abs=1e-12)
    assert rep.backend == "determinant"


def test_vacuum_is_totally_symmetric(benzene):
    rep = weights_sd(SlaterDeterminant(6, (), ()), benzene.group, benzene.rep)
    assert rep.weights["A1g"] == pytest.approx(1.0, abs=1e-12)


def test_determinant_weights_match_state_weights(benzene):
    sd = SlaterDeterminant(6, (0, 1, 3), (0, 1, 2))
    a = weights_sd(sd, benzene.group, benzene.rep).weights
    b = weights(FockState.from_occupations(6, sd.up, sd.down), benzene.group, benzene.rep).weights
    for k in a:
        assert a[k] == pytest.approx(b[k], abs=1e-10)


def test_single_excitation_counts(benzene):
    hf = benzene.hf_determinant()
    e1g, e2u = benzene.shell_orbitals("e1g"), benzene.shell_orbitals("e2u")
    assert len(enumerate_single_excitations(hf, e1g, e2u)) == 8
    one = enumerate_single_excitations(hf, benzene.shell_orbitals("a2u"), benzene.shell_orbitals("b2g"))
    assert len(one) == 2
    assert sum(reduce_manifold(one, benzene.group, benzene.rep).totals.values()) == pytest.approx(2.0)


def test_single_excitation_manifold_reduction(benzene):
    hf = benzene.hf_determinant()
    configs = enumerate_single_excitations(hf, benzene.shell_orbitals("e1g"), benzene.shell_orbitals("e2u"))
    red = reduce_manifold(configs, benzene.group, benzene.rep)
    expected = {"B1u": 2.0, "B2u": 2.0, "E1u": 4.0}
    for k, v in red.totals.items():
        assert v == pytest.approx(expected.get(k, 0.0), abs=1e-10)
    assert red.occurrences["E1u"] == pytest.approx(2.0)


def test_manifold_reduction_is_invariant_to_shell_remixing(benzene):
    # A real rotation inside each degenerate block changes orbitals, not the reduction.
    th = 0.37
    r = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
    mix = np.eye(6)
    mix[1:3, 1:3] = r
    mix[3:5, 3:5] = r.T
    from psym.representation import from_basis_overlap

    rep = from_basis_overlap(benzene.coefficients @ mix, np.eye(6), benzene.basis_matrices, group=benzene.group)
    hf = benzene.hf_determinant()
    configs = enumerate_single_excitations(hf, (1, 2), (3, 4))
    a = reduce_manifold(configs, benzene.group, rep).totals
    b = reduce_manifold(configs, benzene.group, benzene.rep).totals
    for k in a:
        assert a[k] == pytest.approx(b[k], abs=1e-10)


def test_excitation_errors(benzene):
    hf = benzene.hf_determinant()
    with pytest.raises(SlaterError):
        enumerate_single_excitations(hf, (3,), (4,))
    with pytest.raises(SlaterError):
        enumerate_single_excitations(hf, (0,), (1,))
    with pytest.raises(SlaterError):
        reduce_manifold([], benzene.group, benzene.rep)


def test_determinant_validation():
    with pytest.raises(SlaterError):
        SlaterDeterminant(3, (1, 0), ())
    with pytest.raises(SlaterError):
        SlaterDeterminant(3, (3,), ())
    assert SlaterDeterminant.closed_shell(6, 3).n_electrons == 6


def test_dets_file_round_trip(tmp_path):
    dets = [SlaterDeterminant(4, (0, 1), (0, 2)), SlaterDeterminant(4, (), (3,))]
    path = tmp_path / "dets.json"
    save_dets(dets, path)
    assert load_dets(path) == dets
    raw = _jsonio.load(path)
    assert raw["dets"][0]["up"] == [1, 2]
    with pytest.raises(SlaterError):
        dets_from_json({"n_spatial": 2})
