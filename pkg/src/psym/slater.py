"""Overlaps <Psi|U(g)|Psi> of single Slater determinants via determinants of occupied submatrices."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _jsonio
from .pointgroup import GroupError, PointGroup, Reduction, WeightReport, reduce_representation, weights_from_overlaps
from .representation import RepSet


class SlaterError(ValueError):
    """Invalid determinant or inconsistent inputs."""


@dataclass(frozen=True)
class SlaterDeterminant:
    """Spin-restricted determinant with 0-based occupied orbitals per spin, strictly increasing."""

    n_spatial: int
    up: tuple[int, ...]
    down: tuple[int, ...]

    def __post_init__(self):
        for name in ("up", "down"):
            orbs = tuple(int(i) for i in getattr(self, name))
            if any(b <= a for a, b in zip(orbs, orbs[1:])):
                raise SlaterError(f"{name} orbitals must be strictly increasing, got {list(orbs)}")
            if orbs and not (0 <= orbs[0] and orbs[-1] < self.n_spatial):
                raise SlaterError(f"{name} orbitals {list(orbs)} out of range 0..{self.n_spatial - 1}")
            object.__setattr__(self, name, orbs)

    @property
    def n_electrons(self) -> int:
        return len(self.up) + len(self.down)

    @classmethod
    def closed_shell(cls, n_spatial: int, n_occ: int) -> "SlaterDeterminant":
        occ = tuple(range(n_occ))
        return cls(n_spatial, occ, occ)


def _check(sd: SlaterDeterminant, rep: RepSet) -> None:
    if sd.n_spatial != rep.n_spatial:
        raise SlaterError(f"determinant has {sd.n_spatial} orbitals, representation {rep.n_spatial}")


def overlap_det(sd: SlaterDeterminant, rep: RepSet, element: str) -> complex:
    """prod_sigma det D(g)[occ_sigma, occ_sigma]."""
    _check(sd, rep)
    d = rep.matrix(element)
    out = 1.0 + 0j
    for occ in (sd.up, sd.down):
        if occ:
            idx = np.array(occ)
            out *= np.linalg.det(d[np.ix_(idx, idx)])
    return complex(out)


def weights_sd(sd: SlaterDeterminant, group: PointGroup, rep: RepSet) -> WeightReport:
    _check(sd, rep)
    missing = [g for g in group.element_ids if g not in rep.element_ids]
    if missing:
        raise GroupError(f"representation lacks matrices for elements {missing}")
    overlaps = {g: overlap_det(sd, rep, g) for g in group.element_ids}
    return weights_from_overlaps(group, overlaps, backend="determinant", mode="exact")


def enumerate_single_excitations(
    reference: SlaterDeterminant, from_shell: Sequence[int], to_shell: Sequence[int]
) -> list[SlaterDeterminant]:
    """All Sz-preserving single excitations from a filled shell into an empty one.

    Ordering: spin up before down, then source orbital, then target orbital.
    """
    src = [int(i) for i in from_shell]
    dst = [int(i) for i in to_shell]
    for mu in src:
        if mu not in reference.up or mu not in reference.down:
            raise SlaterError(f"source shell orbital {mu} is not doubly occupied in the reference")
    for mu in dst:
        if mu in reference.up or mu in reference.down:
            raise SlaterError(f"target shell orbital {mu} is occupied in the reference")
    out = []
    for spin in ("up", "down"):
        occ = getattr(reference, spin)
        for p in src:
            for q in dst:
                moved = tuple(sorted((set(occ) - {p}) | {q}))
                kw = {"up": reference.up, "down": reference.down, spin: moved}
                out.append(SlaterDeterminant(reference.n_spatial, **kw))
    return out


def reduce_manifold(configs: Sequence[SlaterDeterminant], group: PointGroup, rep: RepSet) -> Reduction:
    """Reduce the representation spanned by a set of determinants.

    The character of class C is sum_i <Psi_i|U(g)|Psi_i>, averaged over the
    members g of C (they agree exactly for a closed set of configurations).
    """
    if not configs:
        raise SlaterError("reduce_manifold needs at least one configuration")
    n = configs[0].n_spatial
    if any(c.n_spatial != n for c in configs):
        raise SlaterError("configurations have inconsistent n_spatial")
    traces = {}
    for label in group.table.class_labels:
        members = group.elements_in_class(label)
        traces[label] = np.mean([sum(overlap_det(c, rep, g) for c in configs) for g in members])
    return reduce_representation(group.table, traces)


def dets_to_json(dets: Sequence[SlaterDeterminant]) -> dict:
    if not dets:
        raise SlaterError("empty determinant list")
    return {
        "n_spatial": dets[0].n_spatial,
        "dets": [{"up": [i + 1 for i in d.up], "down": [i + 1 for i in d.down]} for d in dets],
    }


def dets_from_json(data: dict) -> list[SlaterDeterminant]:
    """Parse a determinant list; orbital indices in the file are 1-based."""
    try:
        n = int(data["n_spatial"])
        return [
            SlaterDeterminant(n, tuple(i - 1 for i in d["up"]), tuple(i - 1 for i in d["down"]))
            for d in data["dets"]
        ]
    except (KeyError, TypeError) as exc:
        raise SlaterError(f"malformed determinant file: {exc}") from exc


def save_dets(dets: Sequence[SlaterDeterminant], path: str | Path) -> None:
    _jsonio.dump(dets_to_json(dets), path)


def load_dets(path: str | Path) -> list[SlaterDeterminant]:
    return dets_from_json(_jsonio.load(path))
