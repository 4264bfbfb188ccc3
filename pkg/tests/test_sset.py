"""Simplicial sets: normal forms, nerves, subdivision, Ex, homology, Kan."""

import itertools

import pytest

from gcat.errors import NotAPosetNerve
from gcat.config import SizeCaps
from gcat.fincat import (
    Functor,
    arrow_category,
    chain_poset,
    identity_functor,
    product_category,
    terminal_category,
)
from gcat.actions import (
    MonoidActionCat,
    chaotic_action,
    chaotic_category,
    cyclic_group,
    delooping,
    subgroup_from_elements,
    translation_action,
)
from gcat.sset import (
    boundary_complex,
    complex_inclusion,
    complex_to_sset,
    e_map,
    equivariant_nerve,
    ex,
    ex_action,
    fixed_sset,
    h_poset_nerve,
    h_sd2,
    h_sd2_map,
    homology,
    horn_complex,
    induced_cell,
    induced_cell_sd,
    is_kan_complex,
    is_kan_complex_lazy_ex,
    is_kan_fibration,
    lastvertex_map,
    nerve,
    nerve_functor,
    pi0,
    product_sset,
    pushout_sset,
    sd,
    sd_complex,
    standard_simplex_complex,
    boundary_matrix,
    identity_sset_map,
)
from gcat.smith import smith_invariants


# -- oracles ---------------------------------------------------------------


def brute_force_chains(cat, n):
    """Independent chain enumeration: identity-free composable n-chains."""
    if n == 0:
        return [((x,),) for x in cat.objects]
    nonid = [m for m in cat.morphism_ids if not cat.is_identity(m)]
    chains = [(m,) for m in nonid]
    for _ in range(n - 1):
        chains = [c + (m,) for c in chains for m in nonid if cat.dst[c[-1]] == cat.src[m]]
    return chains


def sympy_invariants(n_rows, n_cols, entries):
    from sympy import Matrix
    from sympy.matrices.normalforms import smith_normal_form
    if not entries:
        return []
    M = Matrix(n_rows, n_cols, lambda r, c: entries.get((r, c), 0))
    snf = smith_normal_form(M)
    return sorted(abs(snf[i, i]) for i in range(min(n_rows, n_cols)) if snf[i, i] != 0)


# -- nerves ----------------------------------------------------------------


def test_nerve_counts_against_brute_force():
    for cat in [terminal_category(), arrow_category(), chaotic_category(["a", "b"]),
                chain_poset(2).to_fincat(), delooping(cyclic_group(2))]:
        N = nerve(cat, 3)
        for n in range(1, 4):
            assert N.n_nondeg(n) == len(brute_force_chains(cat, n))


def test_nerve_of_point_and_arrow():
    assert [nerve(terminal_category(), 3).n_nondeg(n) for n in range(4)] == [1, 0, 0, 0]
    assert [nerve(arrow_category(), 3).n_nondeg(n) for n in range(4)] == [2, 1, 0, 0]


def test_chaotic_nerve_product_formula():
    # (EX)_n = X^{n+1} in total; nondegenerate count |X|·(|X|-1)^n
    for size in (1, 2, 3):
        X = [f"x{i}" for i in range(size)]
        N = nerve(chaotic_category(X), 3)
        for n in range(4):
            assert N.total_count(n) == size ** (n + 1)
            assert N.n_nondeg(n) == size * (size - 1) ** n


def test_nerve_preserves_products():
    arrow = arrow_category()
    sq = product_category(arrow, arrow)
    n1 = nerve(sq, 3)
    n2 = product_sset(nerve(arrow, 3), nerve(arrow, 3))
    for n in range(4):
        assert n1.n_nondeg(n) == n2.n_nondeg(n)


def test_simplicial_identities_hold_everywhere():
    builds = [
        nerve(chaotic_category(["a", "b"]), 3),
        nerve(delooping(cyclic_group(2)), 3),
        complex_to_sset(boundary_complex(2), 3),
        product_sset(nerve(arrow_category(), 3), complex_to_sset(standard_simplex_complex(1), 3)),
    ]
    for X in builds:
        X.validate()  # includes the exhaustive d_i d_j check


# -- complexes, subdivision, hSd² -------------------------------------------


def test_standard_cells():
    assert complex_to_sset(boundary_complex(1)).n_nondeg(0) == 2
    horn = complex_to_sset(horn_complex(2, 1))
    assert horn.n_nondeg(0) == 3 and horn.n_nondeg(1) == 2
    assert boundary_complex(0).dim() == -1


def test_sd_counts_against_chain_enumeration():
    for K in [standard_simplex_complex(0), standard_simplex_complex(1),
              standard_simplex_complex(2), boundary_complex(2)]:
        P = sd(K)
        SK = sd_complex(K)
        assert len(P.elements) == len(K.faces)
        # one j-simplex per length-(j+1) chain, via direct chain counting
        for j in range(0, 3):
            chains = 0
            for combo in itertools.combinations(sorted(K.faces, key=lambda f: (len(f), f)), j + 1):
                ok = all(set(combo[i]) < set(combo[i + 1]) for i in range(j))
                chains += ok
            assert len([f for f in SK.faces if len(f) == j + 1]) == chains


def test_sd_complex_of_interval():
    SK = sd_complex(standard_simplex_complex(1))
    assert len([f for f in SK.faces if len(f) == 1]) == 3
    assert len([f for f in SK.faces if len(f) == 2]) == 2


def test_double_sd_of_circle_is_12_gon():
    SK = sd_complex(sd_complex(boundary_complex(2)))
    assert len([f for f in SK.faces if len(f) == 1]) == 12
    assert len([f for f in SK.faces if len(f) == 2]) == 12
    assert homology(complex_to_sset(SK, 2), 2) == [(1, ()), (1, ())]


def test_h_sd2_sizes():
    assert h_sd2(standard_simplex_complex(0)).n_objects() == 1
    assert h_sd2(standard_simplex_complex(1)).n_objects() == 5
    m = h_sd2_map(boundary_complex(1), standard_simplex_complex(1))
    assert m.source.n_objects() == 2
    assert all(m.source.is_identity(mm) for mm in m.source.morphism_ids)
    assert m.target.n_objects() == 5


def test_subdivision_invariance_of_homology():
    for K in [standard_simplex_complex(1), standard_simplex_complex(2),
              boundary_complex(2), horn_complex(2, 0)]:
        a = homology(complex_to_sset(K, 3), 3)
        b = homology(complex_to_sset(sd_complex(K), 3), 3)
        assert a == b


def test_h_on_poset_nerves_and_refusal():
    P = chain_poset(2).to_fincat()
    assert h_poset_nerve(nerve(P, 3)).objects == P.objects
    with pytest.raises(NotAPosetNerve):
        h_poset_nerve(nerve(chaotic_category(["a", "b"]), 2))


# -- homology ---------------------------------------------------------------


def test_homology_simplices_and_sphere():
    assert homology(complex_to_sset(standard_simplex_complex(2), 3), 3) == \
        [(1, ()), (0, ()), (0, ())]
    assert homology(complex_to_sset(boundary_complex(2), 3), 3) == \
        [(1, ()), (1, ()), (0, ())]


def test_homology_contractible_groupoid():
    # the chaotic groupoid on a group is contractible
    N = nerve(translation_action(cyclic_group(2)).carrier, 4)
    assert homology(N, 4) == [(1, ()), (0, ()), (0, ()), (0, ())]


def test_homology_bz2_torsion():
    N = nerve(delooping(cyclic_group(2)), 4)
    assert homology(N, 4) == [(1, ()), (0, (2,)), (0, ()), (0, (2,))]


def test_smith_against_sympy_on_boundaries():
    for X in [nerve(delooping(cyclic_group(2)), 3),
              complex_to_sset(boundary_complex(2), 3),
              nerve(chaotic_category(["a", "b"]), 3)]:
        for n in range(1, 4):
            r, c, entries = boundary_matrix(X, n)
            assert smith_invariants(r, c, entries) == sympy_invariants(r, c, entries)


def test_pi0():
    two = complex_to_sset(boundary_complex(1), 2)
    assert len(pi0(two)) == 2
    circle, _, _ = pushout_sset(
        complex_inclusion(boundary_complex(1), standard_simplex_complex(1)),
        complex_inclusion(boundary_complex(1), standard_simplex_complex(1)))
    assert len(pi0(circle)) == 1
    assert homology(circle, 2) == [(1, ()), (1, ())]


# -- Ex and its unit ---------------------------------------------------------


def fence_maps_oracle():
    """Monotone maps from the 3-element fence {0} < {01} > {1} to {0, 1}."""
    out = []
    for a, m, b in itertools.product((0, 1), repeat=3):
        if a <= m and b <= m:
            out.append((a, m, b))
    return out


def test_ex_interval_dimension_one_count():
    # oracle first: |Ex(Δ¹)₁| = monotone fence maps into [1]
    assert len(fence_maps_oracle()) == 5
    d1 = complex_to_sset(standard_simplex_complex(1), 2)
    exd = ex(d1, 2)
    assert exd.sset.total_count(1) == 5
    assert exd.sset.n_nondeg(1) == 3


def test_ex_point():
    exd = ex(complex_to_sset(standard_simplex_complex(0), 3), 3)
    assert [exd.sset.n_nondeg(n) for n in range(4)] == [1, 0, 0, 0]


def test_e_map_on_interval():
    d1 = complex_to_sset(standard_simplex_complex(1), 2)
    exd = ex(d1, 2)
    em = e_map(d1, exd).validate()
    assert em.is_injective()
    v = em.values[(1, "0,1")]
    assert v[1] == (0, 1)          # nondegenerate image
    # endpoints are preserved
    assert exd.sset.face(v, 1) == em.values[(0, "0")]
    assert exd.sset.face(v, 0) == em.values[(0, "1")]


def test_e_map_homology_small():
    for K in [standard_simplex_complex(1), boundary_complex(2)]:
        X = complex_to_sset(K, 3)
        exd = ex(X, 3)
        e_map(X, exd).validate()
        assert homology(X, 3) == homology(exd.sset, 3)


def test_ex_fixed_points_commute():
    Z2 = cyclic_group(2)
    sw = chaotic_action(Z2, {"c0": {"a": "a", "b": "b"}, "c1": {"a": "b", "b": "a"}})
    ens = equivariant_nerve(sw, 2)
    exd = ex(ens.carrier, 2)
    exact = ex_action(ens, exd)
    fixed_of_ex = fixed_sset(exact, Z2)
    ex_of_fixed = ex(fixed_sset(ens, Z2), 2)
    for n in range(3):
        assert fixed_of_ex.n_nondeg(n) == ex_of_fixed.sset.n_nondeg(n)


def test_e_map_equivariant():
    Z2 = cyclic_group(2)
    sw = chaotic_action(Z2, {"c0": {"a": "a", "b": "b"}, "c1": {"a": "b", "b": "a"}})
    ens = equivariant_nerve(sw, 2)
    exd = ex(ens.carrier, 2)
    exact = ex_action(ens, exd)
    em = e_map(ens.carrier, exd)
    for g in Z2.elements:
        assert ens.act[g].then(em).same_values(em.then(exact.act[g]))


# -- Kan --------------------------------------------------------------------


def test_identity_map_is_kan_fibration():
    X = nerve(arrow_category(), 2)
    assert is_kan_fibration(identity_sset_map(X), 2).passed


def test_nerve_of_arrow_not_kan():
    # horn fillers over the point: every Λ¹ problem fills; the first failure
    # is an outer 2-horn hitting the non-invertible edge
    v = is_kan_complex(nerve(arrow_category(), 3), 2)
    assert not v.passed
    n, k = v.failure[0], v.failure[1]
    assert (n, k) == (2, 0)


def test_nerve_of_groupoid_is_kan():
    assert is_kan_complex(nerve(chaotic_category(["a", "b"]), 2), 2).passed


def test_ex2_of_contractible_groupoid_is_kan_cap2():
    ne2 = nerve(chaotic_category(["a", "b"]), 2)
    exd = ex(ne2, 2)
    v = is_kan_complex_lazy_ex(exd.sset, 2, caps=SizeCaps(max_candidates=5_000_000))
    assert v.passed


# -- induced cells ------------------------------------------------------------


def test_induced_cell_free_count():
    Z2 = cyclic_group(2)
    triv = subgroup_from_elements(Z2, ["c0"])
    cell = induced_cell(Z2, triv, boundary_complex(1), 2)
    assert cell.carrier.n_nondeg(0) == 4
    for v in cell.carrier.cells[0]:
        assert cell.act["c1"].apply(cell.carrier.nf_of(0, v)) != cell.carrier.nf_of(0, v)


def test_induced_cell_point():
    Z2 = cyclic_group(2)
    cell = induced_cell(Z2, Z2, standard_simplex_complex(0), 2)
    assert cell.carrier.n_nondeg(0) == 1


def test_induced_cell_sd_comparison():
    Z2 = cyclic_group(2)
    triv = subgroup_from_elements(Z2, ["c0"])
    cell_sd, cell, cmp = induced_cell_sd(Z2, triv, standard_simplex_complex(1), 3)
    for g in Z2.elements:
        assert cell_sd.act[g].then(cmp).same_values(cmp.then(cell.act[g]))
    assert homology(cell_sd.carrier, 2) == homology(cell.carrier, 2)
    # fixed points under the full group: empty on both sides
    assert fixed_sset(cell_sd, Z2).dims() == []
    assert fixed_sset(cell, Z2).dims() == []
    # per-subgroup homology of fixed points match
    for H in (triv, Z2):
        a = fixed_sset(cell_sd, H)
        b = fixed_sset(cell, H)
        assert homology(a, 2) == homology(b, 2)


def test_lastvertex_map_validates():
    for K in [standard_simplex_complex(1), standard_simplex_complex(2), boundary_complex(2)]:
        lv = lastvertex_map(K, 3)
        assert homology(lv.source, 3) == homology(lv.target, 3)


# -- equivariant nerve --------------------------------------------------------


def test_equivariant_nerve_fixed_points_exact():
    Z2 = cyclic_group(2)
    arrow = arrow_category()
    sq = product_category(arrow, arrow)
    from gcat.fincat import pair_mor, pair_obj
    om = {pair_obj(a, b): pair_obj(b, a) for a in ("0", "1") for b in ("0", "1")}
    mm = {pair_mor(f, g): pair_mor(g, f) for f in arrow.morphism_ids for g in arrow.morphism_ids}
    act = MonoidActionCat(Z2, sq, {"c0": identity_functor(sq),
                                   "c1": Functor(sq, sq, om, mm)}).validate()
    from gcat.actions import fixed_category
    lhs = nerve(fixed_category(act, Z2), 3)
    rhs = fixed_sset(equivariant_nerve(act, 3), Z2)
    for n in range(4):
        assert lhs.n_nondeg(n) == rhs.n_nondeg(n)
    assert [lhs.n_nondeg(n) for n in range(3)] == [2, 1, 0]


def test_swap_nerve_has_empty_fixed_points():
    Z2 = cyclic_group(2)
    sw = chaotic_action(Z2, {"c0": {"a": "a", "b": "b"}, "c1": {"a": "b", "b": "a"}})
    assert fixed_sset(equivariant_nerve(sw, 2), Z2).dims() == []


def test_e_map_is_natural():
    # e ∘ f = Ex(f) ∘ e for a nerve map
    from gcat.sset import ex_map
    arrow = arrow_category()
    one = terminal_category()
    F = Functor(arrow, one, {"0": "*", "1": "*"}, {m: "id*" for m in arrow.morphism_ids})
    NX, NY = nerve(arrow, 2), nerve(one, 2)
    nf = nerve_functor(F, NX, NY, 2).validate()
    ex_src, ex_dst = ex(NX, 2), ex(NY, 2)
    lhs = nf.then(e_map(NY, ex_dst))
    rhs = e_map(NX, ex_src).then(ex_map(nf, ex_src, ex_dst))
    assert lhs.same_values(rhs)
