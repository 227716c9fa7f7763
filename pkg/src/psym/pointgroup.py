"""Finite point groups: elements, conjugacy classes, character tables and weight formulas.

A weight of an irreducible representation Gamma in a state is

    w_Gamma = (d_Gamma / |G|) * sum_C conj(chi_Gamma(C)) * sum_{g in C} <Psi|g|Psi>,

and the same expression applied to a reducible character (a sum of overlaps over
several configurations) counts occurrences of Gamma times d_Gamma.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from . import _jsonio

TABLE_TOL = 1e-9


class GroupError(ValueError):
    """Raised for malformed group data or inputs that do not match a group."""


@dataclass(frozen=True)
class GroupElement:
    id: str
    class_label: str
    # Cartesian 3x3 orthogonal matrix, present for built-in groups.
    matrix: np.ndarray | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class CharacterTable:
    group_name: str
    irreps: tuple[tuple[str, int], ...]
    classes: tuple[tuple[str, int], ...]
    chi: np.ndarray = field(repr=False)

    def __post_init__(self):
        chi = np.array(self.chi, dtype=complex)
        if chi.shape != (len(self.irreps), len(self.classes)):
            raise GroupError(
                f"character matrix has shape {chi.shape}, expected "
                f"({len(self.irreps)}, {len(self.classes)})"
            )
        chi.flags.writeable = False
        object.__setattr__(self, "chi", chi)
        object.__setattr__(self, "irreps", tuple((str(l), int(d)) for l, d in self.irreps))
        object.__setattr__(self, "classes", tuple((str(l), int(r)) for l, r in self.classes))

    @property
    def order(self) -> int:
        return sum(r for _, r in self.classes)

    @property
    def irrep_labels(self) -> list[str]:
        return [label for label, _ in self.irreps]

    @property
    def class_labels(self) -> list[str]:
        return [label for label, _ in self.classes]

    def dim(self, irrep: str) -> int:
        return self.irreps[self.irrep_index(irrep)][1]

    def irrep_index(self, irrep: str) -> int:
        for k, (label, _) in enumerate(self.irreps):
            if label == irrep:
                return k
        raise GroupError(f"unknown irrep {irrep!r} for {self.group_name}; known: {self.irrep_labels}")

    def class_index(self, label: str) -> int:
        for k, (c, _) in enumerate(self.classes):
            if c == label:
                return k
        raise GroupError(f"unknown class {label!r} for {self.group_name}; known: {self.class_labels}")

    def character(self, irrep: str, class_label: str) -> complex:
        return complex(self.chi[self.irrep_index(irrep), self.class_index(class_label)])


@dataclass(frozen=True)
class PointGroup:
    """Group elements in a fixed order together with their character table."""

    name: str
    elements: tuple[GroupElement, ...]
    table: CharacterTable

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        ids = [e.id for e in self.elements]
        if len(set(ids)) != len(ids):
            raise GroupError(f"duplicate element ids in {self.name}")
        sizes = {label: 0 for label in self.table.class_labels}
        for e in self.elements:
            if e.class_label not in sizes:
                raise GroupError(f"element {e.id!r} has unknown class {e.class_label!r}")
            sizes[e.class_label] += 1
        for label, size in self.table.classes:
            if sizes[label] != size:
                raise GroupError(f"class {label!r} declares size {size} but has {sizes[label]} elements")
        if "E" not in sizes or sizes["E"] != 1:
            raise GroupError("the identity class 'E' must exist and contain exactly one element")

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def element_ids(self) -> list[str]:
        return [e.id for e in self.elements]

    @property
    def identity(self) -> str:
        return next(e.id for e in self.elements if e.class_label == "E")

    def element(self, element_id: str) -> GroupElement:
        for e in self.elements:
            if e.id == element_id:
                return e
        raise GroupError(f"unknown element {element_id!r} in {self.name}")

    def class_of(self, element_id: str) -> str:
        return self.element(element_id).class_label

    def elements_in_class(self, class_label: str) -> list[str]:
        return [e.id for e in self.elements if e.class_label == class_label]

    def product_table(self, tol: float = 1e-9) -> dict[tuple[str, str], str] | None:
        """Map (g1, g2) -> g1 g2 using the Cartesian matrices, or None if they are absent."""
        if any(e.matrix is None for e in self.elements):
            return None
        table = {}
        for a in self.elements:
            for b in self.elements:
                m = a.matrix @ b.matrix
                for c in self.elements:
                    if np.allclose(c.matrix, m, atol=tol):
                        table[(a.id, b.id)] = c.id
                        break
                else:
                    raise GroupError(f"{self.name} is not closed: {a.id}*{b.id} not found")
        return table


@dataclass(frozen=True)
class Violation:
    kind: str  # "row", "column", "dimension" or "order"
    first: str
    second: str
    residual: float

    def __str__(self):
        what = f"{self.kind} orthogonality" if self.kind in ("row", "column") else f"{self.kind} check"
        return f"{what} violated for ({self.first}, {self.second}): residual {self.residual:.3e}"


@dataclass
class WeightReport:
    weights: dict[str, float]
    overlaps: dict[str, complex]
    sum_of_weights: float
    group: str = ""
    backend: str = ""
    mode: str = "exact"
    shots: int | None = None
    seed: int | None = None
    std_errors: dict[str, complex] | None = None

    def to_dict(self, table: CharacterTable | None = None) -> dict:
        out = {
            "group": self.group,
            "backend": self.backend,
            "mode": self.mode,
            "shots": self.shots,
            "seed": self.seed,
            "weights": dict(self.weights),
            "sum_of_weights": self.sum_of_weights,
            "overlaps": {g: [v.real, v.imag] for g, v in self.overlaps.items()},
        }
        if table is not None:
            out["d_gamma"] = {label: d for label, d in table.irreps}
        if self.std_errors is not None:
            out["std_errors"] = {g: [v.real, v.imag] for g, v in self.std_errors.items()}
        return out


def validate_table(table: CharacterTable, tol: float = TABLE_TOL) -> list[Violation]:
    """Check both orthogonality relations, d = chi(E) and sum_C r_C = |G|."""
    chi = table.chi
    r = np.array([size for _, size in table.classes], dtype=float)
    order = r.sum()
    irreps = table.irrep_labels
    classes = table.class_labels
    out = []
    row = (chi.conj() * r) @ chi.T / order
    for a in range(len(irreps)):
        for b in range(a, len(irreps)):
            res = abs(row[a, b] - (a == b))
            if res > tol:
                out.append(Violation("row", irreps[a], irreps[b], float(res)))
    col = chi.conj().T @ chi / order
    for a in range(len(classes)):
        for b in range(a, len(classes)):
            res = abs(col[a, b] - (a == b) / r[a])
            if res > tol:
                out.append(Violation("column", classes[a], classes[b], float(res)))
    if "E" in classes:
        e = classes.index("E")
        for k, (label, d) in enumerate(table.irreps):
            res = abs(chi[k, e] - d)
            if res > tol:
                out.append(Violation("dimension", label, "E", float(res)))
    else:
        out.append(Violation("dimension", "E", "E", float("inf")))
    # Sum over classes of r_C must equal |G| = sum_Gamma d_Gamma^2.
    res = abs(order - sum(d * d for _, d in table.irreps))
    if res > tol:
        out.append(Violation("order", "classes", "irreps", float(res)))
    return out


def class_sums(group: PointGroup, overlaps: Mapping[str, complex]) -> np.ndarray:
    """Sum overlaps within each conjugacy class, in table class order."""
    missing = [g for g in group.element_ids if g not in overlaps]
    if missing:
        raise GroupError(f"overlaps missing for element(s) {missing} of {group.name}")
    sums = np.zeros(len(group.table.classes), dtype=complex)
    for e in group.elements:
        sums[group.table.class_index(e.class_label)] += overlaps[e.id]
    return sums


def _weights_from_class_sums(table: CharacterTable, sums: np.ndarray) -> np.ndarray:
    d = np.array([dim for _, dim in table.irreps], dtype=float)
    return (d / table.order) * (table.chi.conj() @ sums).real


def weights_from_overlaps(
    group: PointGroup, overlaps: Mapping[str, complex], *, backend: str = "", mode: str = "exact"
) -> WeightReport:
    """Weights of every irrep from the per-element overlaps <Psi|g|Psi>.

    Values are reported raw; small negative weights from round-off are kept.
    """
    w = _weights_from_class_sums(group.table, class_sums(group, overlaps))
    weights = dict(zip(group.table.irrep_labels, (float(x) for x in w)))
    return WeightReport(
        weights=weights,
        overlaps={g: complex(overlaps[g]) for g in group.element_ids},
        sum_of_weights=float(w.sum()),
        group=group.name,
        backend=backend,
        mode=mode,
    )


@dataclass(frozen=True)
class Reduction:
    totals: dict[str, float]
    occurrences: dict[str, float]


def reduce_representation(table: CharacterTable, class_traces: Mapping[str, complex]) -> Reduction:
    """Reduce a reducible representation given by its per-class traces.

    ``class_traces[C]`` is the character of one element of class C, e.g.
    sum_i <Psi_i|U(g)|Psi_i> over a set of configurations.  ``totals`` carries
    the d_Gamma prefactor; ``occurrences`` is totals / d_Gamma.
    """
    missing = [c for c in table.class_labels if c not in class_traces]
    if missing:
        raise GroupError(f"class traces missing for class(es) {missing} of {table.group_name}")
    sums = np.array([size * complex(class_traces[label]) for label, size in table.classes])
    w = _weights_from_class_sums(table, sums)
    totals = {label: float(x) for label, x in zip(table.irrep_labels, w)}
    occ = {label: totals[label] / d for label, d in table.irreps}
    return Reduction(totals=totals, occurrences=occ)


def descend(
    table_from: CharacterTable,
    table_to: CharacterTable,
    mapping: Mapping[str, list[str]],
    weights: Mapping[str, float],
) -> dict[str, float]:
    """Redistribute weights onto a subgroup's irreps using a correlation table.

    A source irrep mapped onto k target irreps contributes weight/k to each.
    """
    targets = set(table_to.irrep_labels)
    out: dict[str, float] = {}
    for irrep, w in weights.items():
        table_from.irrep_index(irrep)
        if irrep not in mapping:
            raise GroupError(f"irrep {irrep!r} of {table_from.group_name} is not in the descent map")
        parts = mapping[irrep]
        for t in parts:
            if t not in targets:
                raise GroupError(f"descent target {t!r} is not an irrep of {table_to.group_name}")
            out[t] = out.get(t, 0.0) + w / len(parts)
    return {label: out[label] for label in table_to.irrep_labels if label in out}


# --- built-in groups -------------------------------------------------------

def _rz(deg: float) -> np.ndarray:
    t = np.deg2rad(deg)
    c, s = np.cos(t), np.sin(t)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def _c2(deg: float) -> np.ndarray:
    """Two-fold rotation about the in-plane axis at ``deg`` from x."""
    t = np.deg2rad(deg)
    u = np.array([np.cos(t), np.sin(t), 0.0])
    return 2.0 * np.outer(u, u) - np.eye(3)


_INV = -np.eye(3)
_SIGMA_H = np.diag([1.0, 1.0, -1.0])


def _d2h() -> PointGroup:
    elements = [
        ("E", "E", np.eye(3)),
        ("C2(z)", "C2", _rz(180)),
        ("C2(x)", "C2'", _c2(0)),
        ("C2(y)", "C2''", _c2(90)),
        ("i", "i", _INV),
        ("sigma(xy)", "sigma_h", _SIGMA_H),
        ("sigma(xz)", "sigma_v", _INV @ _c2(90)),
        ("sigma(yz)", "sigma_d", _INV @ _c2(0)),
    ]
    classes = [("E", 1), ("C2", 1), ("C2'", 1), ("C2''", 1), ("i", 1), ("sigma_h", 1), ("sigma_v", 1), ("sigma_d", 1)]
    rows = {
        "Ag": [1, 1, 1, 1, 1, 1, 1, 1],
        "Au": [1, 1, 1, 1, -1, -1, -1, -1],
        "B1g": [1, 1, -1, -1, 1, 1, -1, -1],
        "B1u": [1, 1, -1, -1, -1, -1, 1, 1],
        "B2g": [1, -1, -1, 1, 1, -1, 1, -1],
        "B2u": [1, -1, -1, 1, -1, 1, -1, 1],
        "B3g": [1, -1, 1, -1, 1, -1, -1, 1],
        "B3u": [1, -1, 1, -1, -1, 1, 1, -1],
    }
    table = CharacterTable("D2h", [(k, 1) for k in rows], classes, list(rows.values()))
    return PointGroup("D2h", tuple(GroupElement(i, c, m) for i, c, m in elements), table)


def _d6h() -> PointGroup:
    # Ring atoms sit on the in-plane axes at 30, 90, 150 degrees (class 3C2);
    # bond midpoints on 0, 60, 120 degrees (class 3C2').
    elements = [("E", "E", np.eye(3))]
    elements += [("C6", "2C6", _rz(60)), ("C6^5", "2C6", _rz(300))]
    elements += [("C3", "2C3", _rz(120)), ("C3^2", "2C3", _rz(240))]
    elements += [("C2", "C2''", _rz(180))]
    elements += [(f"C2({a})", "3C2", _c2(a)) for a in (30, 90, 150)]
    elements += [(f"C2'({a})", "3C2'", _c2(a)) for a in (0, 60, 120)]
    elements += [("sigma_h", "sigma_h", _SIGMA_H)]
    elements += [(f"sigma_v({a})", "3sigma_v", _INV @ _c2(a)) for a in (0, 60, 120)]
    elements += [(f"sigma_d({a})", "3sigma_d", _INV @ _c2(a)) for a in (30, 90, 150)]
    elements += [("S6", "2S6", _SIGMA_H @ _rz(60)), ("S6^5", "2S6", _SIGMA_H @ _rz(300))]
    elements += [("S3", "2S3", _SIGMA_H @ _rz(120)), ("S3^5", "2S3", _SIGMA_H @ _rz(240))]
    elements += [("i", "i", _INV)]
    classes = [
        ("E", 1), ("2C6", 2), ("2C3", 2), ("C2''", 1), ("3C2", 3), ("3C2'", 3),
        ("sigma_h", 1), ("3sigma_v", 3), ("3sigma_d", 3), ("2S6", 2), ("2S3", 2), ("i", 1),
    ]
    rows = {
        "A1g": [1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1],
        "A1u": [1, 1, 1, 1, 1, 1, -1, -1, -1, -1, -1, -1],
        "A2g": [1, 1, 1, 1, -1, -1, 1, -1, -1, 1, 1, 1],
        "A2u": [1, 1, 1, 1, -1, -1, -1, 1, 1, -1, -1, -1],
        "B1g": [1, -1, 1, -1, 1, -1, -1, -1, 1, 1, -1, 1],
        "B1u": [1, -1, 1, -1, 1, -1, 1, 1, -1, -1, 1, -1],
        "B2g": [1, -1, 1, -1, -1, 1, -1, 1, -1, 1, -1, 1],
        "B2u": [1, -1, 1, -1, -1, 1, 1, -1, 1, -1, 1, -1],
        "E1g": [2, 1, -1, -2, 0, 0, -2, 0, 0, -1, 1, 2],
        "E1u": [2, 1, -1, -2, 0, 0, 2, 0, 0, 1, -1, -2],
        "E2g": [2, -1, -1, 2, 0, 0, 2, 0, 0, -1, -1, 2],
        "E2u": [2, -1, -1, 2, 0, 0, -2, 0, 0, 1, 1, -2],
    }
    irreps = [(k, int(v[0])) for k, v in rows.items()]
    table = CharacterTable("D6h", irreps, classes, list(rows.values()))
    return PointGroup("D6h", tuple(GroupElement(i, c, m) for i, c, m in elements), table)


X_PLUS = (-1.0 + np.sqrt(5.0)) / 2.0
X_MINUS = (-1.0 - np.sqrt(5.0)) / 2.0


def d5d_rows(e2u_sigma_d: float = 0.0, a2g_s10_3: float = 1.0) -> dict[str, list[float]]:
    """D5d character rows.

    ``e2u_sigma_d`` and ``a2g_s10_3`` set the E2u entry under 5 sigma_d and the
    A2g entry under 2 S10^3; the defaults (0 and +1) are the values that satisfy
    the orthogonality relations.
    """
    xp, xm = X_PLUS, X_MINUS
    return {
        "A1g": [1, 1, 1, 1, 1, 1, 1, 1],
        "A1u": [1, 1, 1, 1, -1, -1, -1, -1],
        "A2g": [1, 1, 1, -1, 1, a2g_s10_3, 1, -1],
        "A2u": [1, 1, 1, -1, -1, -1, -1, 1],
        "E1g": [2, xp, xm, 0, 2, xp, xm, 0],
        "E1u": [2, xp, xm, 0, -2, -xp, -xm, 0],
        "E2g": [2, xm, xp, 0, 2, xm, xp, 0],
        "E2u": [2, xm, xp, 0, -2, -xm, -xp, e2u_sigma_d],
    }


D5D_CLASSES = [("E", 1), ("2C5", 2), ("2C5^2", 2), ("5C2'", 5), ("i", 1), ("2S10^3", 2), ("2S10", 2), ("5sigma_d", 5)]


def d5d_table(e2u_sigma_d: float = 0.0, a2g_s10_3: float = 1.0) -> CharacterTable:
    rows = d5d_rows(e2u_sigma_d, a2g_s10_3)
    return CharacterTable("D5d", [(k, int(v[0])) for k, v in rows.items()], D5D_CLASSES, list(rows.values()))


def _d5d() -> PointGroup:
    axes = [90 + 36 * j for j in range(5)]
    elements = [("E", "E", np.eye(3))]
    elements += [("C5", "2C5", _rz(72)), ("C5^4", "2C5", _rz(288))]
    elements += [("C5^2", "2C5^2", _rz(144)), ("C5^3", "2C5^2", _rz(216))]
    elements += [(f"C2'({a % 180})", "5C2'", _c2(a)) for a in axes]
    elements += [("i", "i", _INV)]
    elements += [("S10^7", "2S10^3", _INV @ _rz(72)), ("S10^3", "2S10^3", _INV @ _rz(288))]
    elements += [("S10^9", "2S10", _INV @ _rz(144)), ("S10", "2S10", _INV @ _rz(216))]
    elements += [(f"sigma_d({a % 180})", "5sigma_d", _INV @ _c2(a)) for a in axes]
    return PointGroup("D5d", tuple(GroupElement(i, c, m) for i, c, m in elements), d5d_table())


_BUILTINS = {"D2h": _d2h, "D6h": _d6h, "D5d": _d5d}

# Correlation of D6h irreps onto the D2h subgroup whose C2(x) lies on a
# D6h 3C2' axis and C2(y) on a 3C2 axis.
D6H_TO_D2H = {
    "A1g": ["Ag"], "A1u": ["Au"], "A2g": ["B1g"], "A2u": ["B1u"],
    "B1g": ["B2g"], "B1u": ["B2u"], "B2g": ["B3g"], "B2u": ["B3u"],
    "E1g": ["B2g", "B3g"], "E1u": ["B2u", "B3u"], "E2g": ["Ag", "B1g"], "E2u": ["Au", "B1u"],
}


def available_groups() -> list[str]:
    return list(_BUILTINS)


def builtin_group(name: str) -> tuple[PointGroup, CharacterTable]:
    if name not in _BUILTINS:
        raise GroupError(f"unknown group {name!r}; available: {', '.join(_BUILTINS)}")
    group = _BUILTINS[name]()
    bad = validate_table(group.table)
    if bad:
        raise GroupError(f"built-in table {name} failed validation: {bad[0]}")
    return group, group.table


# --- group-spec files ------------------------------------------------------

def group_to_json(group: PointGroup) -> dict:
    t = group.table
    return {
        "name": group.name,
        "classes": [{"label": label, "size": size} for label, size in t.classes],
        "elements": [{"id": e.id, "class": e.class_label} for e in group.elements],
        "irreps": [
            {"label": label, "dim": d, "chi": _jsonio.encode_complex(t.chi[k])}
            for k, (label, d) in enumerate(t.irreps)
        ],
    }


def group_from_json(data: Mapping) -> PointGroup:
    try:
        classes = [(c["label"], c["size"]) for c in data["classes"]]
        irreps = [(ir["label"], ir["dim"]) for ir in data["irreps"]]
        chi = [_jsonio.decode_complex(ir["chi"], 1) for ir in data["irreps"]]
        table = CharacterTable(data["name"], irreps, classes, chi)
        elements = tuple(GroupElement(e["id"], e["class"]) for e in data["elements"])
    except (KeyError, TypeError) as exc:
        raise GroupError(f"malformed group-spec file: {exc}") from exc
    return PointGroup(data["name"], elements, table)


def save_group(group: PointGroup, path: str | Path) -> None:
    _jsonio.dump(group_to_json(group), path)


def load_group(path_or_name: str | Path) -> PointGroup:
    """Load a group-spec JSON file, or a built-in group by name."""
    if str(path_or_name) in _BUILTINS:
        return builtin_group(str(path_or_name))[0]
    if not Path(path_or_name).exists():
        raise GroupError(f"{path_or_name!r} is neither a built-in group ({', '.join(_BUILTINS)}) nor a file")
    return group_from_json(_jsonio.load(path_or_name))
