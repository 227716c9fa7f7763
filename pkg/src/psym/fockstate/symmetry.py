"""Symmetry overlaps <Psi|U(g)|Psi>, irrep weights and projections on statevectors."""

from __future__ import annotations

from typing import Literal

import numpy as np

from ..pointgroup import GroupError, PointGroup, WeightReport, weights_from_overlaps
from ..representation import RepEigen, RepSet, diagonalize, pauli_shortcut
from .state import (
    FockError,
    FockState,
    apply_orbital_rotation,
    occupations,
    orbital_phase_function,
)

Mode = Literal["exact", "pauli", "sampled"]


def _check_rep(state: FockState, rep: RepSet) -> None:
    if state.n_spatial != rep.n_spatial:
        raise FockError(f"state has {state.n_spatial} spatial orbitals, representation {rep.n_spatial}")


def rotated_state(state: FockState, rep: RepSet, eig: RepEigen, element: str) -> FockState:
    """|Psi~(g)> = U~(g)|Psi>, the rotation into the eigenbasis of every shell block."""
    if eig.is_diagonal(rep, element):
        return state
    v = eig.rotation(rep, element)
    return apply_orbital_rotation(state, v.conj().T)


def overlap_ug(state: FockState, rep: RepSet, eig: RepEigen, element: str) -> complex:
    """<Psi|U(g)|Psi> from the rotated state and the diagonal eigenphase factor."""
    _check_rep(state, rep)
    rotated = rotated_state(state, rep, eig, element)
    phase = orbital_phase_function(state.n_spatial, eig.orbital_phases(rep, element))
    probs = np.abs(rotated.amplitudes) ** 2
    return complex(np.sum(probs * np.exp(1j * phase)))


def overlap_direct(state: FockState, rep: RepSet, element: str) -> complex:
    """<Psi|U(g)|Psi> by applying the full orbital rotation D(g) and taking the inner product."""
    _check_rep(state, rep)
    return state.inner(apply_orbital_rotation(state, rep.matrix(element)))


def overlap_pauli(state: FockState, signed_orbitals) -> float:
    """Expectation of the product of Z on both spin qubits of every listed orbital."""
    orbs = sorted(set(signed_orbitals))
    for mu in orbs:
        if not 0 <= mu < state.n_spatial:
            raise FockError(f"orbital index {mu} out of range for n_spatial={state.n_spatial}")
    occ = occupations(state.n_spatial)
    qubits = [q for mu in orbs for q in (2 * mu, 2 * mu + 1)]
    parity = occ[:, qubits].sum(axis=1) % 2 if qubits else np.zeros(len(occ), dtype=int)
    probs = np.abs(state.amplitudes) ** 2
    return float(np.sum(probs * (1 - 2 * parity)))


def _phase_samples(probs: np.ndarray, phase: np.ndarray, shots: int, rng: np.random.Generator):
    p = probs / probs.sum()
    picks = rng.choice(len(p), size=shots, p=p)
    return np.exp(1j * phase[picks])


def _mean_and_error(values: np.ndarray) -> tuple[complex, complex]:
    m = len(values)
    est = complex(values.mean())
    if m < 2:
        return est, 0j
    err = complex(values.real.std(ddof=1), values.imag.std(ddof=1)) / np.sqrt(m)
    return est, err


def sampled_overlap(
    state: FockState,
    rep: RepSet,
    eig: RepEigen,
    element: str,
    shots: int,
    seed: int | np.random.SeedSequence | None = None,
) -> tuple[complex, complex]:
    """Estimate <Psi|U(g)|Psi> from ``shots`` computational-basis samples of |Psi~(g)>.

    Returns the estimate and its standard error, given as (re, im) components
    packed into a complex number.
    """
    if shots < 1:
        raise FockError("shots must be at least 1")
    _check_rep(state, rep)
    rng = np.random.default_rng(seed)
    rotated = rotated_state(state, rep, eig, element)
    phase = orbital_phase_function(state.n_spatial, eig.orbital_phases(rep, element))
    values = _phase_samples(np.abs(rotated.amplitudes) ** 2, phase, shots, rng)
    return _mean_and_error(values)


def weights(
    state: FockState,
    group: PointGroup,
    rep: RepSet,
    mode: Mode = "exact",
    shots: int | None = None,
    seed: int | None = None,
    eig: RepEigen | None = None,
) -> WeightReport:
    """Irrep weights of ``state`` with overlaps evaluated exactly, by Pauli-Z parities, or by sampling."""
    _check_rep(state, rep)
    missing = [g for g in group.element_ids if g not in rep.element_ids]
    if missing:
        raise GroupError(f"representation lacks matrices for elements {missing}")
    std_errors = None
    if mode == "exact":
        eig = eig or diagonalize(rep)
        overlaps = {g: overlap_ug(state, rep, eig, g) for g in group.element_ids}
    elif mode == "pauli":
        signs = pauli_shortcut(rep)
        if signs is None:
            raise FockError("pauli mode needs every shell one-dimensional with +-1 characters; use exact mode")
        overlaps = {g: complex(overlap_pauli(state, signs[g])) for g in group.element_ids}
    elif mode == "sampled":
        if shots is None or shots < 1:
            raise FockError("sampled mode needs shots >= 1")
        eig = eig or diagonalize(rep)
        overlaps, std_errors = _sampled_overlaps(state, group, rep, eig, shots, seed)
    else:
        raise FockError(f"unknown mode {mode!r}; expected exact, pauli or sampled")
    report = weights_from_overlaps(group, overlaps, backend="statevector", mode=mode)
    if mode == "sampled":
        report.shots = shots
        report.seed = seed
        report.std_errors = std_errors
    return report


def _sampled_overlaps(state, group, rep, eig, shots, seed):
    identity = group.identity
    others = [g for g in group.element_ids if g != identity]
    overlaps = {identity: 1.0 + 0j}
    errors = {identity: 0j}
    n = state.n_spatial
    if all(eig.is_diagonal(rep, g) for g in others):
        # No element needs a basis rotation: one shared set of samples serves all.
        rng = np.random.default_rng(seed)
        probs = np.abs(state.amplitudes) ** 2
        picks = rng.choice(len(probs), size=shots, p=probs / probs.sum())
        occ_phase = {g: orbital_phase_function(n, eig.orbital_phases(rep, g)) for g in others}
        for g in others:
            overlaps[g], errors[g] = _mean_and_error(np.exp(1j * occ_phase[g][picks]))
    else:
        children = np.random.SeedSequence(seed).spawn(len(others))
        for g, child in zip(others, children):
            overlaps[g], errors[g] = sampled_overlap(state, rep, eig, g, shots, child)
    return overlaps, errors


def apply_group_element(state: FockState, rep: RepSet, element: str) -> FockState:
    """U(g)|Psi>."""
    _check_rep(state, rep)
    return apply_orbital_rotation(state, rep.matrix(element))


def project(state: FockState, group: PointGroup, rep: RepSet, irrep: str) -> tuple[FockState, float]:
    """P_Gamma|Psi> as the character-weighted sum of rotated states, and its norm a_Gamma."""
    _check_rep(state, rep)
    table = group.table
    k = table.irrep_index(irrep)
    d = table.irreps[k][1]
    out = np.zeros_like(state.amplitudes)
    for e in group.elements:
        coeff = d / group.order * np.conj(table.chi[k, table.class_index(e.class_label)])
        if coeff == 0:
            continue
        out = out + coeff * apply_group_element(state, rep, e.id).amplitudes
    projected = FockState(state.n_spatial, out)
    return projected, projected.norm
