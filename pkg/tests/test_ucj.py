import numpy as np
import pytest

import oracle
from oracle import random_unitary, rotate
from psym.fockstate import FockError, FockState
from psym.fockstate.ucj import (
    UcjLayer,
    UcjParams,
    apply_ucj,
    load_params,
    lucj_masks,
    params_from_json,
    restrict_to_lucj,
    save_params,
)


def symmetric(n, rng):
    a = rng.standard_normal((n, n))
    return a + a.T


def random_params(n, reps, rng):
    return UcjParams(tuple(UcjLayer(random_unitary(n, rng), symmetric(n, rng), symmetric(n, rng)) for _ in range(reps)))


def jastrow_oracle(n, layer, vec):
    cd = oracle.creation_ops(2 * n)
    num = [(c @ c.T).diagonal().real for c in cd]
    phase = np.zeros(4**n)
    for m in range(n):
        for v in range(n):
            for s in (0, 1):
                phase += 0.5 * layer.J_same[m, v] * num[2 * m + s] * num[2 * v + s]
            phase += layer.J_anti[m, v] * num[2 * m] * num[2 * v + 1]
    return np.exp(1j * phase) * vec


def test_apply_ucj_matches_oracle(rng):
    n = 3
    params = random_params(n, 2, rng)
    ref = FockState.from_occupations(n, [0], [0, 1])
    vec = ref.amplitudes.astype(complex)
    for layer in reversed(params.layers):
        vec = rotate(layer.U, jastrow_oracle(n, layer, rotate(layer.U.conj().T, vec)))
    assert np.allclose(apply_ucj(ref, params).amplitudes, vec, atol=1e-10)


def test_ucj_preserves_norm_and_sector(rng):
    params = random_params(4, 3, rng)
    out = apply_ucj(FockState.from_occupations(4, [0, 1], [0, 1]), params)
    assert out.norm == pytest.approx(1.0, abs=1e-12)
    assert out.sectors(1e-24) == [(2, 2)]


def test_lucj_masks():
    same, anti = lucj_masks(9)
    assert same[0, 1] and same[1, 0] and same[7, 8] and not same[0, 2] and not same[0, 0]
    assert [p for p in range(9) if anti[p, p]] == [0, 4, 8]
    assert anti.sum() == 3


def test_restrict_to_lucj(rng):
    p = restrict_to_lucj(random_params(6, 2, rng))
    same, anti = lucj_masks(6)
    for layer in p.layers:
        assert np.all(layer.J_same[~same] == 0) and np.all(layer.J_anti[~anti] == 0)


def test_params_round_trip(tmp_path, rng):
    p = random_params(3, 2, rng)
    path = tmp_path / "ucj.json"
    save_params(p, path)
    back = load_params(path)
    for a, b in zip(p.layers, back.layers):
        assert np.array_equal(a.U, b.U) and np.array_equal(a.J_same, b.J_same) and np.array_equal(a.J_anti, b.J_anti)


def test_validation(rng):
    with pytest.raises(FockError):
        UcjLayer(np.ones((2, 2)), np.zeros((2, 2)), np.zeros((2, 2)))
    with pytest.raises(FockError):
        UcjLayer(np.eye(2), np.array([[0, 1], [0, 0.0]]), np.zeros((2, 2)))
    with pytest.raises(FockError):
        params_from_json({"R": 2, "reps": []})
    with pytest.raises(FockError):
        apply_ucj(FockState.zeros(2), random_params(3, 1, rng))
