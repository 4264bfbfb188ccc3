"""Weak-equivalence certification and the G-global toolkit.

Certificates never claim more than they check: a `sufficient` certificate
embeds a validated equivalence witness, a `necessary` one records π₀ and
Smith-invariant agreement up to its dimension cap.

Homotopy fixed points Fun(EH, φ*C)^H are enumerated directly as twisted
equivariant functors (objects determined on orbit representatives), so the
ambient functor category is never materialized; the materialized route is
kept for cross-checks on small inputs.

The infinite monoid of injections never appears: everything that would
quantify over its universal subgroups is exposed here as an explicit finite
list of (H, φ) pairs and each report says so.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .config import DEFAULT_CAPS, SizeCaps
from .errors import GcatError, SizeCapExceeded, SubgroupNotInUnits
from .fincat import (
    FinCat,
    Functor,
    NatTrans,
    EquivalenceWitness,
    enumerate_functors,
    find_equivalence,
    functor_category_data,
    identity_functor,
    is_ff_eso,
    is_isomorphism_functor,
    pair_obj,
    precompose_on_fun,
    product_category,
    product_functor,
    terminal_category,
    validate_category,
)
from .actions import (
    CellCategory,
    FinGroup,
    FinMonoid,
    MonoidActionCat,
    cell_category,
    chaotic_category,
    chaotic_functor,
    check_equivariant,
    check_homomorphism,
    delooping,
    equivariant_retraction,
    fixed_category,
    graph_subgroup,
    product_action,
    product_monoid,
    restrict_action,
    subgroup_from_elements,
    trivial_action,
    units_group,
)
from .sset import (
    boundary_complex,
    horn_complex,
    standard_simplex_complex,
    h_sd2,
    h_sd2_map,
    homology,
    nerve,
    nerve_functor,
    pi0_map,
    pushout_sset,
    ex,
    ex_map,
)
from .dwyer import (
    dwyer_pushout,
    equivariant_dwyer_pushout,
    find_dwyer_witness,
    fun_witness,
    restrict_witness_to_fixed,
)


# ---------------------------------------------------------------------------
# certificates


@dataclass
class WeakEqCertificate:
    """Verdict on a map; `kind` is 'sufficient' (equivalence witness) or
    'necessary' (π₀ bijection + homology agreement up to `cap`)."""

    kind: str
    passed: bool
    cap: Optional[int] = None
    details: dict = field(default_factory=dict)
    witness: Optional[EquivalenceWitness] = None
    per_subgroup: Optional[dict] = None

    def to_doc(self):
        doc = {"kind": self.kind, "passed": bool(self.passed)}
        if self.cap is not None:
            doc["cap"] = self.cap
        if self.details:
            doc["details"] = _plain(self.details)
        if self.per_subgroup is not None:
            doc["per_subgroup"] = {k: v.to_doc() for k, v in sorted(self.per_subgroup.items())}
        return doc


def _plain(v):
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in sorted(v.items(), key=lambda kv: str(kv[0]))}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return v


def _invariants_doc(h):
    return [{"betti": b, "torsion": list(t)} for b, t in h]


def homology_certificate(f, cap=3, caps: SizeCaps = DEFAULT_CAPS) -> WeakEqCertificate:
    """Necessary conditions: π₀ bijectivity and equal Smith invariants in
    degrees 0..cap-1.  Functors are nerved first."""
    if isinstance(f, Functor):
        NX = nerve(f.source, cap, caps)
        NY = nerve(f.target, cap, caps)
        f = nerve_functor(f, NX, NY, cap).validate()
    hx = homology(f.source, cap)
    hy = homology(f.target, cap)
    bij, _ = pi0_map(f)
    passed = bij and hx == hy
    return WeakEqCertificate(
        "necessary", passed, cap,
        {"pi0_bijective": bij, "source_homology": _invariants_doc(hx),
         "target_homology": _invariants_doc(hy)})


def find_equivariant_equivalence(F: Functor, group: FinGroup, act_C: MonoidActionCat,
                                 act_D: MonoidActionCat,
                                 caps: SizeCaps = DEFAULT_CAPS) -> Optional[EquivalenceWitness]:
    """Exhaustive search for an equivariant quasi-inverse with equivariant
    natural isomorphisms."""
    check_equivariant(F, act_C, act_D)
    C, D = F.source, F.target
    isosC, isosD = C.isos(), D.isos()

    def equivariant_functors(src_act, dst_act):
        for Q in enumerate_functors(src_act.carrier, dst_act.carrier, caps):
            if all(src_act.act[g].then(Q).same_maps(Q.then(dst_act.act[g]))
                   for g in group.elements):
                yield Q

    def equivariant_nat_isos(P, Q, act_src_carrier, isos):
        """Natural isos P => Q commuting with the action."""
        T = P.source
        tgt = P.target
        comps_list = []

        def backtrack(objs, comp):
            if not objs:
                comps_list.append(dict(comp))
                return
            x = objs[0]
            for m in tgt.hom(P.object_map[x], Q.object_map[x]):
                if m not in isos:
                    continue
                comp[x] = m
                ok = True
                for g in group.elements:
                    gx = act_src_carrier.ob(g, x)
                    if gx in comp and comp[gx] != _act_mor(g, m):
                        ok = False
                        break
                if ok:
                    for mm, s, t in T.morphisms:
                        if s in comp and t in comp:
                            if tgt.compose[(comp[t], P.morphism_map[mm])] != \
                               tgt.compose[(Q.morphism_map[mm], comp[s])]:
                                ok = False
                                break
                if ok:
                    backtrack(objs[1:], comp)
                del comp[x]

        def _act_mor(g, m):
            return (act_C if tgt is C else act_D).mor(g, m)

        backtrack(list(T.objects), {})
        return comps_list

    for Q in equivariant_functors(act_D, act_C):
        units = equivariant_nat_isos(identity_functor(C), F.then(Q), act_C, isosC)
        if not units:
            continue
        counits = equivariant_nat_isos(Q.then(F), identity_functor(D), act_D, isosD)
        if not counits:
            continue
        unit = NatTrans(identity_functor(C), F.then(Q), units[0])
        counit = NatTrans(Q.then(F), identity_functor(D), counits[0])
        try:
            return EquivalenceWitness(F, Q, unit, counit).validate()
        except GcatError:
            continue
    return None


def equivalence_certificate(F: Functor, equivariance=None,
                            caps: SizeCaps = DEFAULT_CAPS) -> Optional[WeakEqCertificate]:
    """Sufficient certificate from exhaustive (equivariant) equivalence search."""
    if equivariance is None:
        w = find_equivalence(F, caps)
    else:
        group, act_C, act_D = equivariance
        w = find_equivariant_equivalence(F, group, act_C, act_D, caps)
    if w is None:
        return None
    details = {"isomorphism": is_isomorphism_functor(F)}
    return WeakEqCertificate("sufficient", True, None, details, witness=w)


def f_weak_equivalence(F: Functor, act_C: MonoidActionCat, act_D: MonoidActionCat,
                       family, cap=3, caps: SizeCaps = DEFAULT_CAPS) -> WeakEqCertificate:
    """Per-subgroup homology certificates for f^H, H in the family."""
    check_equivariant(F, act_C, act_D)
    units = units_group(act_C.monoid)
    table = {}
    for H in family:
        if not set(H.elements) <= set(units.elements):
            raise SubgroupNotInUnits(f"{H.elements} not inside units of the acting monoid")
        CH = fixed_category(act_C, H)
        DH = fixed_category(act_D, H)
        FH = Functor(CH, DH, {x: F.object_map[x] for x in CH.objects},
                     {m: F.morphism_map[m] for m in CH.morphism_ids}).validate()
        table["{" + ",".join(H.elements) + "}"] = homology_certificate(FH, cap, caps)
    passed = all(c.passed for c in table.values())
    return WeakEqCertificate("necessary", passed, cap, {"family_size": len(table)},
                             per_subgroup=table)


# ---------------------------------------------------------------------------
# homotopy fixed points via twisted equivariant functors


@dataclass(eq=False)
class HoFixData:
    """Fun(E(K), C)^{Γ_{H,φ}} enumerated directly.

    Objects are functors E(K) -> C fixed under the twisted action, stored as
    (object assignment, coherence isos from the base point); morphisms are
    their base-point components, composed in C.
    """

    category: FinCat
    K: FinGroup
    C: FinCat
    base: str                 # least element of K
    functors: list            # index -> (ob dict, u dict (base,x) -> iso)
    index_of: dict            # canonical encoding -> index
    mor_component: dict       # morphism id -> base component in C

    def object_id(self, idx):
        return f"P{idx:03d}"

    def encoding(self, ob, u):
        return (tuple(sorted(ob.items())), tuple(sorted(u.items())))


def _iso_homs(C: FinCat):
    isos = C.isos()
    return {(x, y): [m for m in C.hom(x, y) if m in isos]
            for x in C.objects for y in C.objects}


def twisted_fun_fixed(K: FinGroup, g_action: dict, H: FinGroup, phi: dict,
                      C: FinCat, caps: SizeCaps = DEFAULT_CAPS) -> HoFixData:
    """Fixed points of Fun(E(K), C) under Γ_{H,φ} ⊂ K × G.

    g_action: G-element -> endofunctor of C (the action through which φ acts);
    H must be a subgroup of K, φ: H -> G a homomorphism (as a dict).
    """
    subgroup_from_elements(K, H.elements)
    base = min(K.elements)
    iso = _iso_homs(C)

    def act_ob(g, x):
        return g_action[g].object_map[x] if g_action else x

    def act_mor(g, m):
        return g_action[g].morphism_map[m] if g_action else m

    # object assignments: F(x·h) forced from F(x) by act(φh)⁻¹ — enumerate on
    # orbit representatives of the right H-action on K
    orbits = []
    seen = set()
    for x in K.elements:
        if x in seen:
            continue
        orb = sorted(K.mul(x, h) for h in H.elements)
        orbits.append(x)
        seen.update(orb)

    phi_inv = {h: None for h in H.elements}
    G_inv = {}

    def inv_act_ob(g, x):
        # act(g)⁻¹ on objects: search once per g
        if g not in G_inv:
            F = g_action[g]
            G_inv[g] = {F.object_map[o]: o for o in C.objects}
        return G_inv[g][x]

    object_choices = []

    def assign_obj(k, ob):
        if k == len(orbits):
            object_choices.append(dict(ob))
            return
        x0 = orbits[k]
        for cx in C.objects:
            good = True
            local = {}
            for h in H.elements:
                xh = K.mul(x0, h)
                # act(φh)(F(xh)) = F(x0)  =>  F(xh) = act(φh)⁻¹ F(x0)
                v = inv_act_ob(phi[h], cx) if g_action else cx
                if local.get(xh, v) != v or ob.get(xh, v) != v:
                    good = False
                    break
                local[xh] = v
            if good:
                ob.update(local)
                assign_obj(k + 1, ob)
                for y in local:
                    del ob[y]

    assign_obj(0, {})

    functors = []
    budget = [0]
    for ob in object_choices:
        free = [x for x in K.elements if x != base]
        u = {(base, base): C.identity[ob[base]]}

        def full_u(uu):
            """All u_{x,y} from the base components (all iso)."""
            out = {}
            inv = {x: C.inverse(uu[(base, x)]) for x in K.elements}
            for x in K.elements:
                for y in K.elements:
                    out[(x, y)] = C.compose[(uu[(base, y)], inv[x])]
            return out

        def fixed_ok(uu):
            full = full_u(uu)
            for h in H.elements:
                for x in K.elements:
                    for y in K.elements:
                        lhs = act_mor(phi[h], full[(K.mul(x, h), K.mul(y, h))]) if g_action else \
                            full[(K.mul(x, h), K.mul(y, h))]
                        if lhs != full[(x, y)]:
                            return False
            return True

        def assign_u(k, uu):
            budget[0] += 1
            if budget[0] > caps.max_candidates:
                raise SizeCapExceeded("twisted functor enumeration", budget[0], caps.max_candidates)
            if k == len(free):
                if fixed_ok(uu):
                    functors.append((dict(ob), {kk: v for kk, v in uu.items() if kk[0] == base}))
                return
            x = free[k]
            for m in iso[(ob[base], ob[x])]:
                uu[(base, x)] = m
                assign_u(k + 1, uu)
                del uu[(base, x)]

        assign_u(0, dict(u))

    functors.sort(key=lambda fu: (tuple(sorted(fu[0].items())), tuple(sorted(fu[1].items()))))
    if len(functors) > caps.max_objects:
        raise SizeCapExceeded("homotopy-fixed-point objects", len(functors), caps.max_objects)
    index_of = {}
    for idx, (ob, u) in enumerate(functors):
        index_of[(tuple(sorted(ob.items())), tuple(sorted(u.items())))] = idx

    # morphisms: base components with naturality-derived components, fixed
    def derived_components(src, dst, eta0):
        obS, uS = src
        obD, uD = dst
        invS = {x: C.inverse(uS[(base, x)]) for x in K.elements}
        return {x: C.compose[(C.compose[(uD[(base, x)], eta0)], invS[x])] for x in K.elements}

    def eta_fixed(comp):
        for h in H.elements:
            for x in K.elements:
                lhs = act_mor(phi[h], comp[K.mul(x, h)]) if g_action else comp[K.mul(x, h)]
                if lhs != comp[x]:
                    return False
        return True

    objects = [f"P{i:03d}" for i in range(len(functors))]
    morphisms = []
    mor_component = {}
    identity = {}
    hom_table = {}
    n_mor = 0
    for a, src in enumerate(functors):
        for b, dst in enumerate(functors):
            good = []
            for eta0 in C.hom(src[0][base], dst[0][base]):
                comp = derived_components(src, dst, eta0)
                if eta_fixed(comp):
                    good.append(eta0)
            n_mor += len(good)
            if n_mor > caps.max_morphisms:
                raise SizeCapExceeded("homotopy-fixed-point morphisms", n_mor, caps.max_morphisms)
            hom_table[(a, b)] = good
            for eta0 in good:
                mid = f"t{a:03d}>{b:03d}:{eta0}"
                morphisms.append((mid, f"P{a:03d}", f"P{b:03d}"))
                mor_component[mid] = eta0
    for a, src in enumerate(functors):
        identity[f"P{a:03d}"] = f"t{a:03d}>{a:03d}:{C.identity[src[0][base]]}"
    compose = {}
    for (b, c2), betas in hom_table.items():
        for (a, b2), alphas in hom_table.items():
            if b2 != b:
                continue
            for beta in betas:
                for alpha in alphas:
                    comp = C.compose[(beta, alpha)]
                    compose[(f"t{b:03d}>{c2:03d}:{beta}", f"t{a:03d}>{b2:03d}:{alpha}")] = \
                        f"t{a:03d}>{c2:03d}:{comp}"
    cat = validate_category(objects, morphisms, identity, compose, caps)
    return HoFixData(cat, K, C, base, functors, index_of, mor_component)


def homotopy_fixed_points(act_C: MonoidActionCat, H: FinGroup, phi: dict,
                          caps: SizeCaps = DEFAULT_CAPS) -> HoFixData:
    """Fun(EH, φ*C)^H for a G-category C; H acts on EH by right translation
    and on C through φ."""
    check_homomorphism(H, act_C.monoid, phi)
    g_action = {g: act_C.act[g] for g in act_C.monoid.elements}
    return twisted_fun_fixed(H, g_action, H, phi, act_C.carrier, caps)


def hofix_functor(F: Functor, src: HoFixData, dst: HoFixData) -> Functor:
    """The induced functor on homotopy fixed points (postcomposition by F)."""
    om = {}
    for idx, (ob, u) in enumerate(src.functors):
        ob2 = {x: F.object_map[v] for x, v in ob.items()}
        u2 = {k: F.morphism_map[v] for k, v in u.items()}
        om[f"P{idx:03d}"] = dst.object_id(dst.index_of[(tuple(sorted(ob2.items())),
                                                        tuple(sorted(u2.items())))])
    mm = {}
    for mid, (s, t) in ((m, (s, t)) for m, s, t in src.category.morphisms):
        eta0 = src.mor_component[mid]
        a2 = int(om[s][1:])
        b2 = int(om[t][1:])
        mm[mid] = f"t{a2:03d}>{b2:03d}:{F.morphism_map[eta0]}"
    return Functor(src.category, dst.category, om, mm).validate()


def materialized_hofix(act_C: MonoidActionCat, H: FinGroup, phi: dict,
                       caps: SizeCaps = DEFAULT_CAPS) -> FinCat:
    """Cross-check route: materialize Fun(EH, C) and take Γ-fixed points."""
    EH = chaotic_category(H.elements)
    data = functor_category_data(EH, act_C.carrier, caps)
    gamma = graph_subgroup(H, phi, act_C.monoid)

    def act_on_fun(h):
        rho = chaotic_functor(EH, EH, {x: H.mul(x, h) for x in H.elements})
        om, mm = {}, {}
        g = phi[h]
        for i, F in enumerate(data.functors):
            img = rho.then(F).then(act_C.act[g])
            om[f"F{i:03d}"] = data.object_id(img)
        for mid, (i, j, comp) in data.trans.items():
            icomp = {x: act_C.act[g].morphism_map[comp[H.mul(x, h)]] for x in H.elements}
            si = data.index_of[rho.then(data.functors[i]).then(act_C.act[g]).signature()]
            ti = data.index_of[rho.then(data.functors[j]).then(act_C.act[g]).signature()]
            mm[mid] = data.trans_id(si, ti, icomp)
        return Functor(data.cat, data.cat, om, mm)

    act = {gamma.pair(h): act_on_fun(h) for h in H.elements}
    action = MonoidActionCat(gamma.group, data.cat, act).validate()
    return fixed_category(action, gamma.group)


def g_global_we(F: Functor, act_C: MonoidActionCat, act_D: MonoidActionCat,
                pairs, cap=3, caps: SizeCaps = DEFAULT_CAPS) -> WeakEqCertificate:
    """Homology certificates of f^{'h'φ} for each supplied (H, φ) pair.

    The idealized notion quantifies over universal subgroups of an infinite
    monoid of injections; this check covers exactly the supplied finite list,
    nothing more.
    """
    check_equivariant(F, act_C, act_D)
    table = {}
    for H, phi in pairs:
        src = homotopy_fixed_points(act_C, H, phi, caps)
        dst = homotopy_fixed_points(act_D, H, phi, caps)
        FH = hofix_functor(F, src, dst)
        key = "{" + ",".join(H.elements) + "}->" + ",".join(f"{h}:{g}" for h, g in sorted(phi.items()))
        table[key] = homology_certificate(FH, cap, caps)
    passed = all(c.passed for c in table.values())
    return WeakEqCertificate("necessary", passed, cap,
                             {"scope": "supplied (H, phi) pairs only",
                              "pairs_checked": len(table)},
                             per_subgroup=table)


def conjugate_pair(H: FinGroup, phi: dict, G: FinGroup, g):
    """(H, c_g ∘ φ): the conjugate pair for invariance checks."""
    ginv = G.inv(g)
    return {h: G.mul(G.mul(g, phi[h]), ginv) for h in H.elements}


# ---------------------------------------------------------------------------
# the restriction comparison (finite avatar of the reduction to EH)


@dataclass
class RestrictionComparison:
    restriction: Functor
    certificate: WeakEqCertificate
    fun_big: object
    fun_small: object
    per_phi: dict


def restriction_comparison(C: FinCat, H: FinGroup, Hp: FinGroup,
                           g_act: Optional[MonoidActionCat] = None,
                           phis=None, caps: SizeCaps = DEFAULT_CAPS) -> RestrictionComparison:
    """Fun(E(H′), C) -> Fun(EH, C) with a sufficient equivariant certificate.

    The quasi-inverse precomposes with E(r) for the equivariant retraction
    r: H′ -> H of the free right H-action; the natural isomorphisms are the
    unique chaotic comparisons.  With `phis`, also certifies the induced map
    on Γ_{H,φ}-fixed points for each φ.
    """
    subgroup_from_elements(Hp, H.elements)
    EH = chaotic_category(H.elements)
    EHp = chaotic_category(Hp.elements)
    dBig = functor_category_data(EHp, C, caps)
    dSmall = functor_category_data(EH, C, caps)
    incl = chaotic_functor(EH, EHp, {h: h for h in H.elements})
    rho = precompose_on_fun(dBig, dSmall, incl)
    r_map = equivariant_retraction(H, Hp.elements, lambda s, h: Hp.mul(s, h))
    Er = chaotic_functor(EHp, EH, r_map)
    Q = precompose_on_fun(dSmall, dBig, Er)

    def unit_component(i, F):
        # F => F∘E(i∘r): apply F to the unique morphism x -> i(r(x))
        ir = {x: r_map[x] for x in Hp.elements}
        comp = {x: F.morphism_map[f"{x}>{ir[x]}"] for x in Hp.elements}
        tgt = Er.then(incl).then(F)
        return dBig.trans_id(i, dBig.index_of[tgt.signature()], comp)

    def counit_component(i, P):
        ri = {x: r_map[x] for x in H.elements}
        comp = {x: P.morphism_map[f"{ri[x]}>{x}"] for x in H.elements}
        src = incl.then(Er).then(P)
        return dSmall.trans_id(dSmall.index_of[src.signature()], i, comp)

    unit = NatTrans(identity_functor(dBig.cat), rho.then(Q),
                    {f"F{i:03d}": unit_component(i, F) for i, F in enumerate(dBig.functors)})
    counit = NatTrans(Q.then(rho), identity_functor(dSmall.cat),
                      {f"F{i:03d}": counit_component(i, P) for i, P in enumerate(dSmall.functors)})
    witness = EquivalenceWitness(rho, Q, unit, counit).validate()

    # equivariance of the witness for the (H × G)-action
    G = g_act.monoid if g_act is not None else None
    HxG = product_monoid(H, G) if G is not None else H

    def fun_action(data, K, Kgrp):
        def act_pair(h, g):
            rho_h = chaotic_functor(K, K, {x: Kgrp.mul(x, h) for x in Kgrp.elements})
            om, mm = {}, {}
            post = g_act.act[g] if g_act is not None else identity_functor(C)
            for i, F in enumerate(data.functors):
                om[f"F{i:03d}"] = data.object_id(rho_h.then(F).then(post))
            for mid, (i, j, comp) in data.trans.items():
                icomp = {x: post.morphism_map[comp[Kgrp.mul(x, h)]] for x in Kgrp.elements}
                si = data.index_of[rho_h.then(data.functors[i]).then(post).signature()]
                ti = data.index_of[rho_h.then(data.functors[j]).then(post).signature()]
                mm[mid] = data.trans_id(si, ti, icomp)
            return Functor(data.cat, data.cat, om, mm)

        if G is None:
            acts = {h: act_pair(h, None) for h in H.elements}
            return MonoidActionCat(H, data.cat, acts).validate()
        acts = {pair_obj(h, g): act_pair(h, g) for h in H.elements for g in G.elements}
        return MonoidActionCat(HxG, data.cat, acts).validate()

    act_big = fun_action(dBig, EHp, Hp)
    act_small = fun_action(dSmall, EH, H)
    check_equivariant(rho, act_big, act_small)
    check_equivariant(Q, act_small, act_big)
    cert = WeakEqCertificate("sufficient", True, None,
                             {"isomorphism": is_isomorphism_functor(rho)}, witness=witness)

    per_phi = {}
    if phis:
        for phi in phis:
            gamma = graph_subgroup(H, phi, G)
            big_fixed = fixed_category(act_big, gamma.group)
            small_fixed = fixed_category(act_small, gamma.group)
            rho_fixed = Functor(big_fixed, small_fixed,
                                {x: rho.object_map[x] for x in big_fixed.objects},
                                {m: rho.morphism_map[m] for m in big_fixed.morphism_ids}).validate()
            key = ",".join(f"{h}:{g}" for h, g in sorted(phi.items()))
            per_phi[key] = equivalence_certificate(rho_fixed, caps=caps)
    return RestrictionComparison(rho, cert, dBig, dSmall, per_phi)


# ---------------------------------------------------------------------------
# saturation


@dataclass
class SaturationAvatar:
    """An (E(H′) × G)-category avatar: discrete (H′×G)-action plus, when it
    exists, the coherence data for the unit into Fun(E(H′), forget −)."""

    Hp: FinGroup
    G: FinGroup
    action: MonoidActionCat        # action of H′ × G on the carrier
    coherence: Optional[dict]      # (k1, k2) -> {object -> morphism}, or None
    label: str = ""


def poset_avatar(P: FinCat, Hp: FinGroup, G: FinGroup) -> SaturationAvatar:
    return SaturationAvatar(Hp, G, trivial_action(product_monoid(Hp, G), P),
                            {(k1, k2): {x: P.identity[x] for x in P.objects}
                             for k1 in Hp.elements for k2 in Hp.elements},
                            label="poset-trivial")


def cell_avatar(cell: CellCategory) -> SaturationAvatar:
    return SaturationAvatar(cell.K, cell.G, cell.kg_action, cell.coherence,
                            label="cell")


def discrete_avatar(Hp: FinGroup, G: FinGroup, action: MonoidActionCat) -> SaturationAvatar:
    """Attempt coherence synthesis; leaves coherence None when impossible."""
    C = action.carrier
    coherence = {}
    for k1 in Hp.elements:
        for k2 in Hp.elements:
            F1 = action.act[pair_obj(k1, G.unit)]
            F2 = action.act[pair_obj(k2, G.unit)]
            comp = {}
            ok = True
            for x in C.objects:
                cands = [m for m in C.hom(F1.object_map[x], F2.object_map[x])]
                if len(cands) != 1:
                    ok = False
                    break
                comp[x] = cands[0]
            if not ok:
                return SaturationAvatar(Hp, G, action, None, label="discrete-no-coherence")
            try:
                NatTrans(F1, F2, comp).validate()
            except GcatError:
                return SaturationAvatar(Hp, G, action, None, label="discrete-no-coherence")
            coherence[(k1, k2)] = comp
    return SaturationAvatar(Hp, G, action, coherence, label="discrete-synthesized")


def _find_any_equivalence(C1: FinCat, C2: FinCat, caps: SizeCaps) -> bool:
    if C1.n_objects() == 0 or C2.n_objects() == 0:
        return C1.n_objects() == C2.n_objects()
    for F in enumerate_functors(C1, C2, caps):
        if is_ff_eso(F):
            return True
    return False


def saturation_check(avatar: SaturationAvatar, pairs, caps: SizeCaps = DEFAULT_CAPS) -> dict:
    """Check the unit into Fun(E(H′), forget −) on φ-fixed points per pair.

    pairs: list of (H subgroup of H′, φ: H -> G dict).  With coherence data the
    unit η is built explicitly and certified; without it, only the abstract
    comparison of the two fixed-point categories is possible and the verdict
    says so (mode 'abstract-comparison').
    """
    Hp, G = avatar.Hp, avatar.G
    C = avatar.action.carrier
    g_action = {g: avatar.action.act[pair_obj(Hp.unit, g)] for g in G.elements}
    per_pair = {}
    for H, phi in pairs:
        gamma = graph_subgroup(H, phi, G)
        c_fixed = fixed_category(avatar.action, gamma.group)
        fun_fixed = twisted_fun_fixed(Hp, g_action, H, phi, C, caps)
        key = "{" + ",".join(H.elements) + "}->" + ",".join(f"{h}:{g}" for h, g in sorted(phi.items()))
        if avatar.coherence is None:
            equivalent = _find_any_equivalence(c_fixed, fun_fixed.category, caps)
            per_pair[key] = {"mode": "abstract-comparison", "passed": equivalent,
                             "kind": "none" if not equivalent else "abstract"}
            continue
        base = fun_fixed.base
        om = {}
        for x in c_fixed.objects:
            ob = {k: avatar.action.ob(pair_obj(k, G.unit), x) for k in Hp.elements}
            u = {(base, k): avatar.coherence[(base, k)][x] for k in Hp.elements}
            om[x] = fun_fixed.object_id(fun_fixed.index_of[(tuple(sorted(ob.items())),
                                                            tuple(sorted(u.items())))])
        mm = {}
        for m in c_fixed.morphism_ids:
            a2 = int(om[c_fixed.src[m]][1:])
            b2 = int(om[c_fixed.dst[m]][1:])
            base_act = avatar.action.act[pair_obj(base, G.unit)]
            mm[m] = f"t{a2:03d}>{b2:03d}:{base_act.morphism_map[m]}"
        eta = Functor(c_fixed, fun_fixed.category, om, mm).validate()
        cert = equivalence_certificate(eta, caps=caps)
        if cert is None:
            per_pair[key] = {"mode": "eta", "passed": False, "kind": "none"}
        else:
            kind = "isomorphism" if cert.details.get("isomorphism") else "equivalence"
            per_pair[key] = {"mode": "eta", "passed": True, "kind": kind}
    return {
        "pairs": per_pair,
        "all_passed": all(v["passed"] for v in per_pair.values()),
        "scope": ("finite avatar: E(H') stands in for the chaotic category on an "
                  "infinite monoid; pairs needing intertwiners outside H' can fail "
                  "for size reasons alone"),
    }


# ---------------------------------------------------------------------------
# generating-cofibration families


@dataclass
class GeneratorSpec:
    model: str               # thomason | global | f_model | g_global_thin |
                             # g_global_thick_avatar | g_homotopy_fp | g_homotopy_fp_thick
    n: int
    k: Optional[int] = None  # horn index; None means boundary inclusion
    acyclic: bool = False
    params: dict = field(default_factory=dict)

    def validate(self):
        if self.acyclic:
            if self.k is None or not (0 <= self.k <= self.n) or self.n < 1:
                raise GcatError("acyclic generators need 1 <= n and 0 <= k <= n")
        else:
            if self.n < 0:
                raise GcatError("n must be >= 0")
        return self


@dataclass
class GeneratedMap:
    name: str
    functor: Functor
    group: Optional[FinGroup] = None
    act_src: Optional[MonoidActionCat] = None
    act_dst: Optional[MonoidActionCat] = None
    monoid: Optional[FinMonoid] = None
    act_src_monoid: Optional[MonoidActionCat] = None
    act_dst_monoid: Optional[MonoidActionCat] = None


def _core_inclusion(spec: GeneratorSpec):
    if spec.acyclic:
        K = horn_complex(spec.n, spec.k)
        tag = f"hSd2(L{spec.n}_{spec.k} -> D{spec.n})"
    else:
        K = boundary_complex(spec.n)
        tag = f"hSd2(bD{spec.n} -> D{spec.n})"
    L = standard_simplex_complex(spec.n)
    return h_sd2_map(K, L), tag


def _cell_times_map(cell: CellCategory, m: Functor, caps: SizeCaps):
    G = cell.G
    src_prod = product_category(cell.category, m.source, caps)
    dst_prod = product_category(cell.category, m.target, caps)
    idc = identity_functor(cell.category)
    fun = product_functor(idc, m, src_prod, dst_prod)
    act_src = product_action(cell.g_action, trivial_action(G, m.source), caps)
    act_dst = product_action(cell.g_action, trivial_action(G, m.target), caps)
    return fun, act_src, act_dst


def generating_maps(spec: GeneratorSpec, caps: SizeCaps = DEFAULT_CAPS) -> GeneratedMap:
    """Emit one generating (acyclic) cofibration for the requested model."""
    spec.validate()
    m, tag = _core_inclusion(spec)
    model = spec.model
    if model == "thomason":
        return GeneratedMap(f"thomason:{tag}", m.validate())
    if model == "global":
        H = spec.params["H"]
        BH = delooping(H)
        src = product_category(BH, m.source, caps)
        dst = product_category(BH, m.target, caps)
        fun = product_functor(identity_functor(BH), m, src, dst)
        return GeneratedMap(f"global[BH={'/'.join(H.elements)}]:{tag}", fun.validate())
    if model == "f_model":
        M = spec.params["M"]
        H = spec.params["H"]
        from .fincat import discrete_category
        els = sorted({min(M.mul(x, h) for h in H.elements) for x in M.elements})
        MH = discrete_category(els)
        src = product_category(MH, m.source, caps)
        dst = product_category(MH, m.target, caps)
        fun = product_functor(identity_functor(MH), m, src, dst)

        def coset_act(mm):
            om = {x: min(M.mul(M.mul(mm, x), h) for h in H.elements) for x in els}
            return Functor(MH, MH, om, {f"id:{x}": f"id:{om[x]}" for x in els})

        mh_act = MonoidActionCat(M, MH, {mm: coset_act(mm) for mm in M.elements}).validate()
        act_src = product_action(mh_act, trivial_action(M, m.source), caps)
        act_dst = product_action(mh_act, trivial_action(M, m.target), caps)
        return GeneratedMap(f"f_model:{tag}", fun.validate(), monoid=M,
                            act_src_monoid=act_src, act_dst_monoid=act_dst)
    if model in ("g_global_thin", "g_global_thick_avatar", "g_homotopy_fp", "g_homotopy_fp_thick"):
        G = spec.params["G"]
        if model == "g_global_thin":
            H = spec.params["H"]
            phi = spec.params["phi"]
            cell = cell_category(H, G, H, phi, caps)
        elif model == "g_global_thick_avatar":
            H, Hp, phi = spec.params["H"], spec.params["Hp"], spec.params["phi"]
            cell = cell_category(Hp, G, H, phi, caps)
        elif model == "g_homotopy_fp":
            H = spec.params["H"]
            incl = {h: h for h in H.elements}
            cell = cell_category(H, G, H, incl, caps)
        else:
            H = spec.params["H"]
            incl = {h: h for h in H.elements}
            cell = cell_category(G, G, H, incl, caps)
        fun, act_src, act_dst = _cell_times_map(cell, m, caps)
        return GeneratedMap(f"{model}:{tag}", fun.validate(), group=G,
                            act_src=act_src, act_dst=act_dst)
    raise GcatError(f"unknown model tag {model!r}")


# ---------------------------------------------------------------------------
# transfer-criterion hypothesis harness


def _nerve_homology_pair(C1: FinCat, C2: FinCat, cap, caps):
    h1 = homology(nerve(C1, cap, caps), cap)
    h2 = homology(nerve(C2, cap, caps), cap)
    return h1, h2


def check_transfer_conditions(gens_I, gens_J, U, cap=3, caps: SizeCaps = DEFAULT_CAPS) -> dict:
    """Desk-scale checks of the three transfer hypotheses for a right adjoint
    avatar U.

    U is a tag: ("identity",), ("fun_e", H') for Fun(E(H′), −),
    ("fixed", H) for H-fixed points, or ("ex2_nerve",).  gens_I / gens_J are
    GeneratedMap lists (cofibrations / acyclic cofibrations).
    """
    report = {"U": U[0], "condition1": [], "condition2": [], "condition3": [],
              "scope": "supplied generators only"}

    def apply_U_functor(gm: GeneratedMap):
        F = gm.functor
        if U[0] == "identity":
            return F, None
        if U[0] == "fun_e":
            Hp = U[1]
            EHp = chaotic_category(Hp.elements)
            dS = functor_category_data(EHp, F.source, caps)
            dT = functor_category_data(EHp, F.target, caps)
            from .fincat import postcompose_on_fun
            return postcompose_on_fun(dS, dT, F).validate(), (dS, dT)
        if U[0] == "fixed":
            H = U[1]
            aS = restrict_action(gm.act_src, H)
            aT = restrict_action(gm.act_dst, H)
            CH = fixed_category(aS, H)
            DH = fixed_category(aT, H)
            return Functor(CH, DH, {x: F.object_map[x] for x in CH.objects},
                           {m: F.morphism_map[m] for m in CH.morphism_ids}).validate(), None
        if U[0] == "ex2_nerve":
            NX = nerve(F.source, cap, caps)
            NY = nerve(F.target, cap, caps)
            nf = nerve_functor(F, NX, NY, cap).validate()
            ex1s, ex1t = ex(NX, min(cap, 2), caps), ex(NY, min(cap, 2), caps)
            m1 = ex_map(nf, ex1s, ex1t)
            ex2s, ex2t = ex(ex1s.sset, min(cap, 2), caps), ex(ex1t.sset, min(cap, 2), caps)
            return ex_map(m1, ex2s, ex2t).validate(), None
        raise GcatError(f"unknown U tag {U[0]!r}")

    # (1) UFj is a weak equivalence, certified by homology
    for gm in gens_J:
        Uj, _ = apply_U_functor(gm)
        cert = homology_certificate(Uj, cap, caps) if isinstance(Uj, Functor) \
            else homology_certificate(Uj, min(cap, 2), caps)
        report["condition1"].append({"generator": gm.name, "passed": cert.passed,
                                     "certificate": cert.to_doc()})

    # (2) pushouts along Fi go to homotopy pushouts; proxy = pushout of
    # U-images along the (underlying-injective) transported leg
    one = terminal_category()
    for gm in gens_I:
        F = gm.functor
        A, B = F.source, F.target
        if gm.group is not None:
            triv = trivial_action(gm.group, one)
            collapse = Functor(A, one, {x: "*" for x in A.objects},
                               {mm: "id*" for mm in A.morphism_ids}).validate()
            w = find_dwyer_witness(F, (gm.group, gm.act_src, gm.act_dst), caps)
            if w is None:
                report["condition2"].append({"generator": gm.name, "passed": False,
                                             "reason": "no equivariant Dwyer witness"})
                continue
            act_D, po = equivariant_dwyer_pushout(gm.act_src, gm.act_dst, triv, F, collapse, w, caps)
        else:
            collapse = Functor(A, one, {x: "*" for x in A.objects},
                               {mm: "id*" for mm in A.morphism_ids}).validate()
            w = find_dwyer_witness(F, None, caps)
            if w is None:
                report["condition2"].append({"generator": gm.name, "passed": False,
                                             "reason": "no Dwyer witness"})
                continue
            po = dwyer_pushout(A, B, one, F, collapse, w, caps)
            act_D = None
        D = po.category if not isinstance(po, tuple) else po[1].category
        if U[0] == "identity":
            h1, h2 = _nerve_homology_pair(D, D, cap, caps)
            report["condition2"].append({"generator": gm.name, "passed": h1 == h2})
        elif U[0] == "fun_e":
            Hp = U[1]
            EHp = chaotic_category(Hp.elements)
            w2, data = fun_witness(EHp, w, caps)
            dC = functor_category_data(EHp, one, caps)
            collapse2 = Functor(data["A"].cat, dC.cat,
                                {o: dC.object_id(data["A"].functor_of(o).then(collapse))
                                 for o in data["A"].cat.objects}, {})
            from .fincat import postcompose_on_fun
            collapse2 = postcompose_on_fun(data["A"], dC, collapse)
            po2 = dwyer_pushout(data["A"].cat, data["B"].cat, dC.cat, w2.i, collapse2, w2, caps)
            dD = functor_category_data(EHp, D, caps)
            h1, h2 = _nerve_homology_pair(dD.cat, po2.category, cap, caps)
            report["condition2"].append({"generator": gm.name, "passed": h1 == h2,
                                         "U_pushout_homology": _invariants_doc(h1),
                                         "proxy_homology": _invariants_doc(h2)})
        elif U[0] == "fixed":
            H = U[1]
            wH = restrict_witness_to_fixed(w, H)
            DH = fixed_category(restrict_action(act_D, H), H)
            CH = fixed_category(restrict_action(trivial_action(gm.group, one), H), H)
            cH = Functor(wH.i.source, CH, {x: "*" for x in wH.i.source.objects},
                         {mm: "id*" for mm in wH.i.source.morphism_ids}).validate()
            poH = dwyer_pushout(wH.i.source, wH.i.target, CH, wH.i, cH, wH, caps)
            h1, h2 = _nerve_homology_pair(DH, poH.category, cap, caps)
            report["condition2"].append({"generator": gm.name, "passed": h1 == h2})
        elif U[0] == "ex2_nerve":
            ex_cap = min(cap, 2)

            def ex2_of(cat):
                N = nerve(cat, ex_cap, caps)
                e1 = ex(N, ex_cap, caps)
                return ex(e1.sset, ex_cap, caps)

            def ex2_map_of(fun, srccat, dstcat):
                NX, NY = nerve(srccat, ex_cap, caps), nerve(dstcat, ex_cap, caps)
                nf = nerve_functor(fun, NX, NY, ex_cap)
                e1s, e1t = ex(NX, ex_cap, caps), ex(NY, ex_cap, caps)
                m1 = ex_map(nf, e1s, e1t)
                e2s, e2t = ex(e1s.sset, ex_cap, caps), ex(e1t.sset, ex_cap, caps)
                return ex_map(m1, e2s, e2t)

            ui = ex2_map_of(F, A, B)
            uc = ex2_map_of(collapse, A, one)
            P, _, _ = pushout_sset(ui, uc, caps)
            UD = ex2_of(D)
            h1 = homology(UD.sset, ex_cap)
            h2 = homology(P, ex_cap)
            report["condition2"].append({"generator": gm.name, "passed": h1 == h2})

    # (3) filtered colimits: finite ascending chains have their colimit at the
    # top, so the comparison functor must be an exact isomorphism
    chain = [h_sd2(boundary_complex(1)), h_sd2(standard_simplex_complex(1))]
    top = chain[-1]
    for gm_idx, gm in enumerate(gens_I[:1]):
        if U[0] == "fun_e":
            Hp = U[1]
            EHp = chaotic_category(Hp.elements)
            d_top = functor_category_data(EHp, top, caps)
            d_again = functor_category_data(EHp, top, caps)
            comparison = identity_functor(d_top.cat)
            ok = is_isomorphism_functor(comparison) and d_again.cat.objects == d_top.cat.objects
        else:
            comparison = identity_functor(top)
            ok = is_isomorphism_functor(comparison)
        report["condition3"].append({"chain_length": len(chain), "passed": ok,
                                     "note": "finite chain colimit taken at the top"})
    report["all_passed"] = all(e["passed"] for key in ("condition1", "condition2", "condition3")
                               for e in report[key])
    return report
