import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psym.pointgroup import (
    D6H_TO_D2H,
    CharacterTable,
    GroupError,
    available_groups,
    builtin_group,
    class_sums,
    d5d_table,
    descend,
    group_from_json,
    group_to_json,
    load_group,
    reduce_representation,
    save_group,
    validate_table,
    weights_from_overlaps,
)

GROUPS = ["D2h", "D6h", "D5d"]


@pytest.mark.parametrize("name", GROUPS)
def test_builtin_tables_are_valid(name):
    group, table = builtin_group(name)
    assert validate_table(table) == []
    assert sum(d * d for _, d in table.irreps) == group.order


@pytest.mark.parametrize("name,order,n_classes", [("D2h", 8, 8), ("D6h", 24, 12), ("D5d", 20, 8)])
def test_group_sizes(name, order, n_classes):
    group, table = builtin_group(name)
    assert group.order == order
    assert len(table.classes) == n_classes


@pytest.mark.parametrize("name", GROUPS)
def test_cartesian_matrices_close_under_products(name):
    group, _ = builtin_group(name)
    prod = group.product_table()
    assert prod is not None
    assert len(prod) == group.order**2


@pytest.mark.parametrize("name", GROUPS)
def test_classes_are_conjugacy_classes(name):
    group, _ = builtin_group(name)
    mats = {e.id: np.asarray(e.matrix) for e in group.elements}
    for e in group.elements:
        conj = set()
        for h in mats.values():
            m = h @ mats[e.id] @ h.T
            conj.add(next(g for g, x in mats.items() if np.allclose(x, m)))
        assert conj == set(group.elements_in_class(e.class_label))


@pytest.mark.parametrize("name", GROUPS)
def test_one_dim_irreps_are_homomorphisms(name):
    group, table = builtin_group(name)
    prod = group.product_table()
    for label, d in table.irreps:
        if d != 1:
            continue
        chi = {g: table.character(label, group.class_of(g)) for g in group.element_ids}
        for (a, b), c in prod.items():
            assert chi[a] * chi[b] == pytest.approx(chi[c])


def test_d5d_printed_e2u_entry_rejected():
    bad = validate_table(d5d_table(e2u_sigma_d=1.0))
    assert bad
    assert any("E2u" in (v.first, v.second) for v in bad)


def test_d5d_printed_a2g_entry_rejected():
    assert validate_table(d5d_table(a2g_s10_3=-1.0))


def test_broken_table_reports_violation():
    _, table = builtin_group("D2h")
    chi = table.chi.copy()
    chi[1, 2] = -chi[1, 2]
    broken = CharacterTable("X", table.irreps, table.classes, chi)
    bad = validate_table(broken)
    assert bad and "orthogonality" in str(bad[0])


def test_unknown_group():
    with pytest.raises(GroupError):
        builtin_group("C99")
    with pytest.raises(GroupError):
        load_group("C99")
    assert available_groups() == GROUPS


def test_identity_overlaps_give_trivial_irrep():
    group, table = builtin_group("D6h")
    rep = weights_from_overlaps(group, {g: 1.0 for g in group.element_ids})
    assert rep.weights["A1g"] == pytest.approx(1.0)
    assert rep.sum_of_weights == pytest.approx(1.0)
    assert sum(abs(v) for k, v in rep.weights.items() if k != "A1g") < 1e-12


@pytest.mark.parametrize("name", GROUPS)
def test_irrep_characters_give_unit_weight(name):
    # Overlaps equal to chi_Gamma(g)/d_Gamma are those of a state in irrep Gamma (row-averaged).
    group, table = builtin_group(name)
    for k, (label, d) in enumerate(table.irreps):
        ov = {g: table.chi[k, table.class_index(group.class_of(g))] / d for g in group.element_ids}
        w = weights_from_overlaps(group, ov).weights
        assert w[label] == pytest.approx(1.0)
        assert sum(abs(v) for l2, v in w.items() if l2 != label) < 1e-12


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(GROUPS), st.lists(st.complex_numbers(max_magnitude=1.0, allow_nan=False), min_size=24, max_size=24))
def test_sum_rule_depends_only_on_identity(name, values):
    group, _ = builtin_group(name)
    ov = {g: values[i] for i, g in enumerate(group.element_ids)}
    ov[group.identity] = 1.0
    assert weights_from_overlaps(group, ov).sum_of_weights == pytest.approx(1.0, abs=1e-12)


def test_missing_overlap_raises():
    group, _ = builtin_group("D2h")
    with pytest.raises(GroupError):
        class_sums(group, {"E": 1.0})


def test_reduce_regular_representation():
    for name in GROUPS:
        group, table = builtin_group(name)
        traces = {c: (group.order if c == "E" else 0.0) for c in table.class_labels}
        red = reduce_representation(table, traces)
        for label, d in table.irreps:
            assert red.occurrences[label] == pytest.approx(d)
            assert red.totals[label] == pytest.approx(d * d)


def test_descend_equal_split_and_total():
    _, t6 = builtin_group("D6h")
    _, t2 = builtin_group("D2h")
    w = {label: 0.0 for label in t6.irrep_labels}
    w["E1u"] = 0.6
    w["A1g"] = 0.4
    out = descend(t6, t2, D6H_TO_D2H, w)
    assert out["B2u"] == pytest.approx(0.3)
    assert out["B3u"] == pytest.approx(0.3)
    assert out["Ag"] == pytest.approx(0.4)
    assert sum(out.values()) == pytest.approx(1.0)


def test_descent_map_matches_characters():
    # Restricting a D6h irrep to the subgroup must reproduce the sum of its D2h images.
    g6, t6 = builtin_group("D6h")
    g2, t2 = builtin_group("D2h")
    m6 = {e.id: np.asarray(e.matrix) for e in g6.elements}
    image = {e.id: next(k for k, m in m6.items() if np.allclose(m, e.matrix)) for e in g2.elements}
    for label in t6.irrep_labels:
        for e in g2.elements:
            lhs = t6.character(label, g6.class_of(image[e.id]))
            rhs = sum(t2.character(x, e.class_label) for x in D6H_TO_D2H[label])
            assert lhs == pytest.approx(rhs)


def test_group_json_round_trip(tmp_path):
    group, table = builtin_group("D6h")
    path = tmp_path / "g.json"
    save_group(group, path)
    back = load_group(path)
    assert back.element_ids == group.element_ids
    assert np.array_equal(back.table.chi, table.chi)
    assert group_to_json(group_from_json(group_to_json(group))) == group_to_json(group)
