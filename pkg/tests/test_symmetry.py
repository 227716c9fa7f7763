import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracle import rotate
from psym.fockstate import (
    FockError,
    FockState,
    apply_group_element,
    overlap_direct,
    overlap_pauli,
    overlap_ug,
    project,
    sampled_overlap,
    weights,
)
from psym.huckel import HuckelModel
from psym.pointgroup import GroupError
from psym.representation import diagonalize, pauli_shortcut

SMALL = HuckelModel(4, group_name="D2h")


def test_overlap_paths_agree_with_oracle(benzene, rng):
    eig = diagonalize(benzene.rep)
    s = FockState.random(6, rng, 3, 3)
    for g in ["C6", "C2'(60)", "sigma_d(30)", "S3", "i"]:
        dense = np.vdot(s.amplitudes, rotate(benzene.rep.matrix(g), s.amplitudes))
        assert overlap_direct(s, benzene.rep, g) == pytest.approx(dense, abs=1e-10)
        assert overlap_ug(s, benzene.rep, eig, g) == pytest.approx(dense, abs=1e-10)


def test_pauli_overlap_matches_ug(benzene_d2h, rng):
    rep = benzene_d2h.rep
    signs = pauli_shortcut(rep)
    eig = diagonalize(rep)
    s = FockState.random(6, rng, 2, 4)
    for g in benzene_d2h.group.element_ids:
        assert overlap_pauli(s, signs[g]) == pytest.approx(overlap_ug(s, rep, eig, g).real, abs=1e-12)


def test_pauli_out_of_range():
    with pytest.raises(FockError):
        overlap_pauli(FockState.zeros(2), [5])


def test_pauli_mode_needs_shortcut(benzene, rng):
    with pytest.raises(FockError):
        weights(FockState.random(6, rng), benzene.group, benzene.rep, mode="pauli")


def test_modes_agree_on_abelian_rep(rng):
    s = FockState.random(4, rng)
    a = weights(s, SMALL.group, SMALL.rep).weights
    b = weights(s, SMALL.group, SMALL.rep, mode="pauli").weights
    for k in a:
        assert a[k] == pytest.approx(b[k], abs=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(0, 4), st.integers(0, 4))
def test_weights_nonnegative_and_sum_to_one(seed, na, nb):
    s = FockState.random(4, np.random.default_rng(seed), na, nb)
    rep = weights(s, SMALL.group, SMALL.rep)
    assert rep.sum_of_weights == pytest.approx(1.0, abs=1e-12)
    assert min(rep.weights.values()) > -1e-12


def test_weights_equal_projection_norms(benzene, rng):
    s = FockState.random(6, rng, 3, 3)
    w = weights(s, benzene.group, benzene.rep).weights
    for irrep in ["A1g", "E1u", "B2g", "E2g"]:
        _, norm = project(s, benzene.group, benzene.rep, irrep)
        assert w[irrep] == pytest.approx(norm**2, abs=1e-10)


def test_weights_invariant_under_group_action(benzene, rng):
    s = FockState.random(6, rng, 3, 3)
    w0 = weights(s, benzene.group, benzene.rep).weights
    moved = apply_group_element(s, benzene.rep, "C6")
    w1 = weights(moved, benzene.group, benzene.rep).weights
    for k in w0:
        assert w0[k] == pytest.approx(w1[k], abs=1e-10)


def test_sampled_mode_is_seeded(benzene, rng):
    s = FockState.random(6, rng, 3, 3)
    a = weights(s, benzene.group, benzene.rep, mode="sampled", shots=500, seed=7)
    b = weights(s, benzene.group, benzene.rep, mode="sampled", shots=500, seed=7)
    c = weights(s, benzene.group, benzene.rep, mode="sampled", shots=500, seed=8)
    assert a.weights == b.weights
    assert a.weights != c.weights
    assert a.overlaps["E"] == 1.0
    assert a.shots == 500 and a.seed == 7 and a.std_errors is not None


def test_sampled_overlap_error_estimate(benzene, rng):
    s = FockState.random(6, rng, 3, 3)
    eig = diagonalize(benzene.rep)
    est, err = sampled_overlap(s, benzene.rep, eig, "C6", 20000, 3)
    exact = overlap_ug(s, benzene.rep, eig, "C6")
    assert abs(est.real - exact.real) < 5 * err.real + 1e-12
    assert abs(est.imag - exact.imag) < 5 * err.imag + 1e-12
    assert 0 < err.real < 0.01


def test_sampled_mode_requires_shots(benzene, rng):
    with pytest.raises(FockError):
        weights(FockState.random(6, rng), benzene.group, benzene.rep, mode="sampled")
    with pytest.raises(FockError):
        weights(FockState.random(6, rng), benzene.group, benzene.rep, mode="bogus")


def test_dimension_mismatch(benzene):
    with pytest.raises(FockError):
        weights(FockState.zeros(4), benzene.group, benzene.rep)


def test_group_rep_mismatch(benzene, benzene_d2h):
    with pytest.raises(GroupError):
        weights(FockState.zeros(6), benzene.group, benzene_d2h.rep)


def test_projectors_idempotent_and_orthogonal(benzene, rng):
    s = FockState.random(6, rng, 3, 3)
    p, _ = project(s, benzene.group, benzene.rep, "E1u")
    pp, _ = project(p, benzene.group, benzene.rep, "E1u")
    assert np.allclose(pp.amplitudes, p.amplitudes, atol=1e-10)
    q, _ = project(p, benzene.group, benzene.rep, "E2g")
    assert q.norm < 1e-10
