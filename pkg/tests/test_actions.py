"""Monoids, groups, strict actions, fixed points, quotients, retractions."""

import pytest
from hypothesis import given, settings, strategies as st

from gcat.errors import ActionNotFree, NotASubgroup, SubgroupNotInUnits
from gcat.fincat import (
    arrow_category,
    find_isomorphism,
    pair_obj,
    product_category,
    terminal_category,
)
from gcat.actions import (
    MonoidActionCat,
    cell_category,
    chaotic_action,
    chaotic_category,
    cyclic_group,
    delooping,
    equivariant_retraction,
    fixed_category,
    graph_subgroup,
    is_good_subgroup,
    make_monoid,
    product_action,
    quotient_by_free_action,
    subgroup_from_elements,
    subgroups,
    symmetric_group,
    translation_action,
    trivial_action,
    trivial_group,
    units_group,
)


def zero_monoid():
    """{1, g, z} with g² = 1 and z absorbing."""
    return make_monoid(
        ["1", "g", "z"],
        {("1", "1"): "1", ("1", "g"): "g", ("1", "z"): "z",
         ("g", "1"): "g", ("g", "g"): "1", ("g", "z"): "z",
         ("z", "1"): "z", ("z", "g"): "z", ("z", "z"): "z"},
        "1")


def test_units_of_group_is_group():
    G = cyclic_group(3)
    assert units_group(G).elements == G.elements


def test_units_idempotent_monoid():
    M = make_monoid(["1", "a"], {("1", "1"): "1", ("1", "a"): "a",
                                 ("a", "1"): "a", ("a", "a"): "a"}, "1")
    assert units_group(M).elements == ("1",)


def test_units_zero_monoid():
    assert units_group(zero_monoid()).elements == ("1", "g")


def test_good_subgroups():
    M = zero_monoid()
    H = subgroup_from_elements(M, ["1", "g"])
    assert is_good_subgroup(M, H) is False          # z·g = z
    assert is_good_subgroup(M, subgroup_from_elements(M, ["1"])) is True
    G = symmetric_group(3)
    for H in subgroups(G):
        assert is_good_subgroup(G, H) is True       # cancellation


def test_fixed_category_trivial_action():
    Z2 = cyclic_group(2)
    arrow = arrow_category()
    A = trivial_action(Z2, arrow)
    F = fixed_category(A, Z2)
    assert F.objects == arrow.objects and F.n_morphisms() == 3


def test_fixed_category_translation_is_empty():
    Z2 = cyclic_group(2)
    assert fixed_category(translation_action(Z2), Z2).n_objects() == 0


def test_fixed_category_swap_with_fixed_point():
    Z2 = cyclic_group(2)
    A = chaotic_action(Z2, {"c0": {"a": "a", "b": "b", "c": "c"},
                            "c1": {"a": "b", "b": "a", "c": "c"}})
    F = fixed_category(A, Z2)
    assert F.objects == ("c",) and F.n_morphisms() == 1


def test_fixed_requires_units():
    M = zero_monoid()
    one = terminal_category()
    A = trivial_action(M, one)
    with pytest.raises((SubgroupNotInUnits, NotASubgroup)):
        fixed_category(A, subgroup_from_elements(M, ["1", "z"]))


def test_chaotic_category_counts():
    assert chaotic_category([]).n_objects() == 0
    assert chaotic_category(["x"]).n_morphisms() == 1
    E2 = chaotic_category(["a", "b"])
    assert E2.n_morphisms() == 4
    assert all(m in E2.isos() for m in E2.morphism_ids)


def test_translation_action_is_free():
    G = cyclic_group(3)
    A = translation_action(G)
    for g in G.elements:
        if g == G.unit:
            continue
        for x in A.carrier.objects:
            assert A.ob(g, x) != x
        for m in A.carrier.morphism_ids:
            assert A.mor(g, m) != m


def test_delooping():
    assert find_isomorphism(delooping(trivial_group()), terminal_category()) is not None
    B = delooping(cyclic_group(2))
    assert B.n_objects() == 1 and B.n_morphisms() == 2
    assert all(m in B.isos() for m in B.morphism_ids)


def test_delooping_nerve_one_nondeg_per_dim():
    from gcat.sset import nerve
    N = nerve(delooping(cyclic_group(2)), 3)
    assert [N.n_nondeg(n) for n in range(4)] == [1, 1, 1, 1]


def test_graph_subgroup_examples():
    Z2, Z4 = cyclic_group(2), cyclic_group(4)
    triv = graph_subgroup(Z2, {"c0": "c0", "c1": "c0"}, Z4)
    assert triv.group.elements == (pair_obj("c0", "c0"), pair_obj("c1", "c0"))
    diag = graph_subgroup(Z2, {"c0": "c0", "c1": "c1"}, Z2)
    assert diag.group.elements == (pair_obj("c0", "c0"), pair_obj("c1", "c1"))
    tw = graph_subgroup(Z2, {"c0": "c0", "c1": "c2"}, Z4)
    assert tw.group.elements == (pair_obj("c0", "c0"), pair_obj("c1", "c2"))


def test_equivariant_retraction_translation():
    Z2 = cyclic_group(2)
    r = equivariant_retraction(Z2, Z2.elements, lambda s, h: Z2.mul(s, h))
    assert r == {"c0": "c0", "c1": "c1"}


def test_equivariant_retraction_two_copies():
    Z2 = cyclic_group(2)
    els = ["x.c0", "x.c1", "y.c0", "y.c1"]

    def act(s, h):
        tag, v = s.split(".")
        return f"{tag}.{Z2.mul(v, h)}"

    r = equivariant_retraction(Z2, els, act)
    for s in els:
        for h in Z2.elements:
            assert r[act(s, h)] == Z2.mul(r[s], h)


def test_retraction_rejects_fixed_point():
    Z2 = cyclic_group(2)
    with pytest.raises(ActionNotFree):
        equivariant_retraction(Z2, ["s"], lambda s, h: "s")


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 4), st.integers(1, 3))
def test_retraction_property_on_free_sums(n, copies):
    G = cyclic_group(n)
    els = [f"t{i}.{g}" for i in range(copies) for g in G.elements]

    def act(s, h):
        tag, v = s.split(".")
        return f"{tag}.{G.mul(v, h)}"

    r = equivariant_retraction(G, els, act)
    for s in els:
        for h in G.elements:
            assert r[act(s, h)] == G.mul(r[s], h)


def test_quotient_trivial_group():
    one_grp = trivial_group()
    arrow = arrow_category()
    Q, q = quotient_by_free_action(trivial_action(one_grp, arrow))
    assert Q.objects == arrow.objects and Q.n_morphisms() == 3


def test_quotient_translation_is_delooping():
    Z2 = cyclic_group(2)
    Q, q = quotient_by_free_action(translation_action(Z2))
    assert Q.n_objects() == 1 and Q.n_morphisms() == 2
    assert find_isomorphism(Q, delooping(Z2)) is not None


def test_quotient_recovers_orbits():
    Z2 = cyclic_group(2)
    A = translation_action(Z2)
    Q, q = quotient_by_free_action(A)
    fibers = {}
    for x in A.carrier.objects:
        fibers.setdefault(q.object_map[x], set()).add(x)
    for x in A.carrier.objects:
        orbit = {A.ob(g, x) for g in Z2.elements}
        assert fibers[q.object_map[x]] == orbit
    assert A.carrier.n_objects() == Q.n_objects() * 2
    assert A.carrier.n_morphisms() == Q.n_morphisms() * 2


def test_quotient_rejects_non_free():
    Z2 = cyclic_group(2)
    one = terminal_category()
    with pytest.raises(ActionNotFree):
        quotient_by_free_action(trivial_action(Z2, one))


def test_cell_object_count_is_order_of_G():
    Z2, Z4 = cyclic_group(2), cyclic_group(4)
    for K, G, phi in [
        (Z2, Z2, {"c0": "c0", "c1": "c1"}),
        (Z2, Z4, {"c0": "c0", "c1": "c2"}),
        (Z4, Z2, {"c0": "c0", "c1": "c1", "c2": "c0", "c3": "c1"}),
    ]:
        cell = cell_category(K, G, K, phi)
        assert cell.category.n_objects() == len(G.elements)


def test_fixed_commutes_with_products():
    Z2 = cyclic_group(2)
    S = chaotic_action(Z2, {"c0": {"a": "a", "b": "b"}, "c1": {"a": "b", "b": "a"}})
    arrowA = trivial_action(Z2, arrow_category())
    P = product_action(S, arrowA)
    lhs = fixed_category(P, Z2)
    rhs = product_category(fixed_category(S, Z2), fixed_category(arrowA, Z2))
    assert (lhs.n_objects(), lhs.n_morphisms()) == (rhs.n_objects(), rhs.n_morphisms())
    if lhs.n_objects():
        assert find_isomorphism(lhs, rhs) is not None
