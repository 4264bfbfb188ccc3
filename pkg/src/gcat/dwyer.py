"""Dwyer maps: sieve/cosieve predicates, witness search, normalization, the
explicit pushout construction, and closure under fixed points, products, and
functor categories.

A DwyerWitness packages the factorization i = (X ↪ B) ∘ f together with the
right adjoint r of f and the adjunction transformations.  The pushout
construction requires the unit to be the identity (so ε·f = id); witnesses
with invertible units are repaired by `normalize_unit`, never silently.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .config import DEFAULT_CAPS, SizeCaps
from .errors import (
    EquivarianceViolation,
    GcatError,
    NotASubcategoryInclusion,
    SizeCapExceeded,
    UnitNotInvertible,
    WitnessNotNormalized,
)
from .fincat import (
    FinCat,
    Functor,
    FunctorCategoryData,
    NatTrans,
    functor_category_data,
    identity_functor,
    inclusion_functor,
    pair_mor,
    pair_obj,
    postcompose_on_fun,
    product_category,
    product_functor,
    validate_category,
)
from .actions import (
    FinGroup,
    MonoidActionCat,
    check_equivariant,
    fixed_category,
    restrict_action,
    units_group,
)


# ---------------------------------------------------------------------------
# sieves and cosieves


def check_subcategory_inclusion(i: Functor):
    i.validate()
    if not i.is_injective_on_objects():
        raise NotASubcategoryInclusion("not injective on objects")
    if not i.is_fully_faithful():
        raise NotASubcategoryInclusion("not fully faithful onto its image")
    return i


def is_sieve(i: Functor) -> bool:
    """Every morphism of the target landing in the image lies in the image."""
    check_subcategory_inclusion(i)
    D = i.target
    im_obj = set(i.object_map.values())
    im_mor = set(i.morphism_map.values())
    for m, s, t in D.morphisms:
        if t in im_obj and (s not in im_obj or m not in im_mor):
            return False
    return True


def is_cosieve(j: Functor) -> bool:
    """Dual: every morphism of the target starting in the image lies in it."""
    check_subcategory_inclusion(j)
    D = j.target
    im_obj = set(j.object_map.values())
    im_mor = set(j.morphism_map.values())
    for m, s, t in D.morphisms:
        if s in im_obj and (t not in im_obj or m not in im_mor):
            return False
    return True


def _upward_closed(cat: FinCat, objs) -> bool:
    objs = set(objs)
    return all(t in objs for m, s, t in cat.morphisms if s in objs)


def upward_closure(cat: FinCat, objs):
    out = set(objs)
    changed = True
    while changed:
        changed = False
        for m, s, t in cat.morphisms:
            if s in out and t not in out:
                out.add(t)
                changed = True
    return out


# ---------------------------------------------------------------------------
# witnesses


@dataclass(eq=False)
class DwyerWitness:
    """Certificate that i: A -> B is a (G-equivariant) Dwyer map."""

    i: Functor
    cosieve_objects: tuple     # objects of the cosieve X inside B
    X: FinCat                  # the cosieve as a full subcategory of B
    f: Functor                 # A -> X, the corestriction of i
    r: Functor                 # X -> A
    unit: NatTrans             # id_A => r∘f
    counit: NatTrans           # f∘r => id_X
    group: Optional[FinGroup] = None
    act_A: Optional[MonoidActionCat] = None
    act_B: Optional[MonoidActionCat] = None

    def is_normalized(self):
        A = self.i.source
        return all(self.unit.components[a] == A.identity[a] for a in A.objects)

    def validate(self):
        A, B = self.i.source, self.i.target
        if not is_sieve(self.i):
            raise GcatError("witness functor is not a sieve")
        incl = inclusion_functor(self.X, B)
        if not is_cosieve(incl):
            raise GcatError("witness cosieve is not a cosieve")
        if set(self.cosieve_objects) != set(self.X.objects):
            raise GcatError("cosieve object list does not match X")
        if not set(self.i.object_map.values()) <= set(self.X.objects):
            raise GcatError("cosieve does not contain the image of i")
        self.f.validate()
        self.r.validate()
        if not self.f.then(incl).same_maps(self.i):
            raise GcatError("i does not factor as inclusion ∘ f")
        self.unit.validate()
        self.counit.validate()
        if not self.unit.target.same_maps(self.f.then(self.r)):
            raise GcatError("unit target is not r∘f")
        if not self.counit.source.same_maps(self.r.then(self.f)):
            raise GcatError("counit source is not f∘r")
        # triangle identities
        for a in A.objects:
            lhs = self.X.compose[(self.counit.components[self.f.object_map[a]],
                                  self.f.morphism_map[self.unit.components[a]])]
            if lhs != self.X.identity[self.f.object_map[a]]:
                raise GcatError(f"triangle identity (εf)(fη) = id fails at {a!r}")
        for x in self.X.objects:
            lhs = A.compose[(self.r.morphism_map[self.counit.components[x]],
                             self.unit.components[self.r.object_map[x]])]
            if lhs != A.identity[self.r.object_map[x]]:
                raise GcatError(f"triangle identity (rε)(ηr) = id fails at {x!r}")
        if self.group is not None:
            self._validate_equivariance()
        return self

    def _validate_equivariance(self):
        G, aA, aB = self.group, self.act_A, self.act_B
        check_equivariant(self.i, aA, aB)
        xset = set(self.X.objects)
        for g in G.elements:
            if {aB.ob(g, x) for x in xset} != xset:
                raise EquivarianceViolation("cosieve not stable under the action", witness=g)
        actX = {g: Functor(self.X, self.X,
                           {x: aB.ob(g, x) for x in self.X.objects},
                           {m: aB.mor(g, m) for m in self.X.morphism_ids})
                for g in G.elements}
        aX = MonoidActionCat(G, self.X, actX).validate()
        check_equivariant(self.f, aA, aX)
        check_equivariant(self.r, aX, aA)
        for g in G.elements:
            for a in self.i.source.objects:
                if aA.mor(g, self.unit.components[a]) != self.unit.components[aA.ob(g, a)]:
                    raise EquivarianceViolation("unit not equivariant", witness=(g, a))
            for x in self.X.objects:
                if aB.mor(g, self.counit.components[x]) != self.counit.components[aB.ob(g, x)]:
                    raise EquivarianceViolation("counit not equivariant", witness=(g, x))


def _full_subcategory_action(B: FinCat, objs):
    return B.full_subcategory(objs)


def find_dwyer_witness(i: Functor, equivariance=None,
                       caps: SizeCaps = DEFAULT_CAPS) -> Optional[DwyerWitness]:
    """Exhaustive search for a Dwyer witness with identity unit.

    equivariance: optional (group, act_A, act_B).  Cosieves are enumerated in
    decreasing size (lexicographic ties), retractions lexicographically;
    returns the first success, or None as a proof of failure at these sizes.
    """
    check_subcategory_inclusion(i)
    if not is_sieve(i):
        return None
    A, B = i.source, i.target
    group = act_A = act_B = None
    if equivariance is not None:
        group, act_A, act_B = equivariance
        check_equivariant(i, act_A, act_B)
    image = set(i.object_map.values())
    min_cosieve = upward_closure(B, image)
    rest = sorted(set(B.objects) - min_cosieve)
    if len(rest) > 20:
        raise SizeCapExceeded("cosieve candidates", 2 ** len(rest), 2 ** 20)
    preimage_obj = {i.object_map[a]: a for a in A.objects}
    preimage_mor = {i.morphism_map[m]: m for m in A.morphism_ids}

    candidates = []
    for k in range(len(rest), -1, -1):
        for extra in itertools.combinations(rest, k):
            objs = min_cosieve | set(extra)
            if not _upward_closed(B, objs):
                continue
            if group is not None and any(
                {act_B.ob(g, x) for x in objs} != objs for g in group.elements
            ):
                continue
            candidates.append(tuple(sorted(objs)))
    for objs in candidates:
        w = _witness_search_on_cosieve(i, objs, group, act_A, act_B, caps,
                                       preimage_obj, preimage_mor)
        if w is not None:
            return w
    return None


def _witness_search_on_cosieve(i, cos_objs, group, act_A, act_B, caps,
                               preimage_obj, preimage_mor):
    A, B = i.source, i.target
    X = B.full_subcategory(cos_objs)
    f = Functor(A, X, dict(i.object_map), dict(i.morphism_map)).validate()
    image = set(i.object_map.values())
    free_objs = sorted(set(cos_objs) - image)

    # orbit representatives first, the rest forced by equivariance
    if group is not None:
        seen = set()
        order = []
        orbit_of = {}
        for x in free_objs:
            if x in seen:
                continue
            orb = sorted({act_B.ob(g, x) for g in group.elements})
            order.append(x)
            for y in orb:
                seen.add(y)
                orbit_of[y] = x
    else:
        order = free_objs

    def hom_profile_ok(x, rx):
        return all(len(X.hom(f.object_map[a], x)) == len(A.hom(a, rx)) for a in A.objects)

    r_ob = {i.object_map[a]: a for a in A.objects}
    budget = [0]

    def assign_objects(k):
        budget[0] += 1
        if budget[0] > caps.max_candidates:
            raise SizeCapExceeded("witness search", budget[0], caps.max_candidates)
        if k == len(order):
            return search_morphisms()
        x = order[k]
        for rx in A.objects:
            if not hom_profile_ok(x, rx):
                continue
            propagated = {}
            ok = True
            if group is not None:
                for g in group.elements:
                    gx = act_B.ob(g, x)
                    grx = act_A.ob(g, rx)
                    if gx in r_ob or gx in propagated:
                        if propagated.get(gx, r_ob.get(gx)) != grx:
                            ok = False
                            break
                    else:
                        propagated[gx] = grx
                if ok:
                    for y, ry in propagated.items():
                        if y not in image and not hom_profile_ok(y, ry):
                            ok = False
                            break
            else:
                propagated[x] = rx
            if not ok:
                continue
            for y, ry in propagated.items():
                r_ob[y] = ry
            res = assign_objects(k + 1)
            if res is not None:
                return res
            for y in propagated:
                del r_ob[y]
        return None

    def search_morphisms():
        r_mor = {}
        for m in X.morphism_ids:
            if m in preimage_mor:
                r_mor[m] = preimage_mor[m]
        free_mors = sorted(m for m in X.morphism_ids if m not in r_mor)

        def assign_mors(k):
            budget[0] += 1
            if budget[0] > caps.max_candidates:
                raise SizeCapExceeded("witness search", budget[0], caps.max_candidates)
            if k == len(free_mors):
                return finish_r(dict(r_mor))
            m = free_mors[k]
            for cand in A.hom(r_ob[X.src[m]], r_ob[X.dst[m]]):
                r_mor[m] = cand
                ok = True
                if group is not None:
                    for g in group.elements:
                        gm = act_B.mor(g, m)
                        if gm in r_mor and r_mor[gm] != act_A.mor(g, cand):
                            ok = False
                            break
                if ok:
                    for (g2, f2), h2 in X.compose.items():
                        if g2 in r_mor and f2 in r_mor and h2 in r_mor:
                            if A.compose[(r_mor[g2], r_mor[f2])] != r_mor[h2]:
                                ok = False
                                break
                if ok:
                    res = assign_mors(k + 1)
                    if res is not None:
                        return res
                del r_mor[m]
            return None

        return assign_mors(0)

    def finish_r(r_mor):
        # identities must be preserved
        for x in X.objects:
            if r_mor[X.identity[x]] != A.identity[r_ob[x]]:
                return None
        try:
            r = Functor(X, A, dict(r_ob), r_mor).validate()
        except GcatError:
            return None
        return search_counit(r)

    def search_counit(r):
        eps = {}
        for a in A.objects:
            eps[i.object_map[a]] = X.identity[i.object_map[a]]
        free = sorted(x for x in X.objects if x not in eps)

        def assign_eps(k):
            budget[0] += 1
            if budget[0] > caps.max_candidates:
                raise SizeCapExceeded("witness search", budget[0], caps.max_candidates)
            if k == len(free):
                return finish(dict(eps))
            x = free[k]
            for cand in X.hom(f.object_map[r.object_map[x]], x):
                if r.morphism_map[cand] != A.identity[r.object_map[x]]:
                    continue
                eps[x] = cand
                ok = True
                if group is not None:
                    for g in group.elements:
                        gx = act_B.ob(g, x)
                        if gx in eps and eps[gx] != act_B.mor(g, cand):
                            ok = False
                            break
                if ok:
                    for m in X.morphism_ids:
                        s, t = X.src[m], X.dst[m]
                        if s in eps and t in eps:
                            frm = f.morphism_map[r.morphism_map[m]]
                            if X.compose[(m, eps[s])] != X.compose[(eps[t], frm)]:
                                ok = False
                                break
                if ok:
                    res = assign_eps(k + 1)
                    if res is not None:
                        return res
                del eps[x]
            return None

        def finish(eps):
            unit = NatTrans(identity_functor(A), f.then(r),
                            {a: A.identity[a] for a in A.objects})
            counit = NatTrans(r.then(f), identity_functor(X), eps)
            w = DwyerWitness(i, tuple(sorted(X.objects)), X, f, r, unit, counit,
                             group, act_A, act_B)
            try:
                return w.validate()
            except GcatError:
                return None

        return assign_eps(0)

    return assign_objects(0)


def normalize_unit(w: DwyerWitness) -> DwyerWitness:
    """Massage a witness with invertible unit into one with identity unit.

    Redefines r on image objects, conjugates its morphism action along the
    comparison isomorphism, and re-verifies everything (including
    equivariance when tagged).
    """
    if w.is_normalized():
        w.validate()
        return w
    A, X = w.i.source, w.X
    isos = A.isos()
    if any(w.unit.components[a] not in isos for a in A.objects):
        raise UnitNotInvertible("unit has a non-invertible component")
    preimage = {w.f.object_map[a]: a for a in A.objects}
    r_ob = {}
    phi = {}  # phi_x : r_new(x) -> r_old(x) in A
    for x in X.objects:
        if x in preimage:
            c = preimage[x]
            r_ob[x] = c
            phi[x] = w.unit.components[c]
        else:
            r_ob[x] = w.r.object_map[x]
            phi[x] = A.identity[w.r.object_map[x]]
    r_mor = {}
    for m in X.morphism_ids:
        x, y = X.src[m], X.dst[m]
        r_mor[m] = A.compose[(A.compose[(A.inverse(phi[y]), w.r.morphism_map[m])], phi[x])]
    r = Functor(X, A, r_ob, r_mor).validate()
    eps = {x: X.compose[(w.counit.components[x], w.f.morphism_map[phi[x]])]
           for x in X.objects}
    unit = NatTrans(identity_functor(A), w.f.then(r), {a: A.identity[a] for a in A.objects})
    counit = NatTrans(r.then(w.f), identity_functor(X), eps)
    out = DwyerWitness(w.i, w.cosieve_objects, X, w.f, r, unit, counit,
                       w.group, w.act_A, w.act_B)
    return out.validate()


# ---------------------------------------------------------------------------
# the explicit pushout


def _v_obj(b):
    return f"V:{b}"


def _v_mor(m):
    return f"V:{m}"


def _cross_mor(alpha, y):
    return f"[{alpha}@{y}]"


@dataclass(eq=False)
class DwyerPushout:
    category: FinCat
    leg_from_c: Functor  # j : C -> D
    leg_from_b: Functor  # d : B -> D
    cross: dict          # cross morphism id -> (C morphism, V∩X object)


def dwyer_pushout(A: FinCat, B: FinCat, C: FinCat, i: Functor, c: Functor,
                  w: DwyerWitness, caps: SizeCaps = DEFAULT_CAPS) -> DwyerPushout:
    """Explicit pushout of B <-i- A -c-> C along a Dwyer map.

    The witness must be normalized (unit = identity, hence ε·f = id).
    C-objects keep their ids; V-objects are prefixed 'V:'.
    """
    if w.i is not i:
        w = DwyerWitness(i, w.cosieve_objects, w.X, w.f, w.r, w.unit, w.counit,
                         w.group, w.act_A, w.act_B)
    w.validate()
    if not w.is_normalized():
        raise WitnessNotNormalized("dwyer_pushout requires a unit-identity witness")
    c.validate()
    if c.source is not A and c.source.objects != A.objects:
        raise GcatError("c must have source A")
    image = set(i.object_map.values())
    preimage_obj = {i.object_map[a]: a for a in A.objects}
    preimage_mor = {i.morphism_map[m]: m for m in A.morphism_ids}
    V = [b for b in B.objects if b not in image]
    vset = set(V)
    xset = set(w.cosieve_objects)
    vx = [b for b in V if b in xset]

    def cr(y):
        return c.object_map[w.r.object_map[y]]

    objects = list(C.objects) + [_v_obj(b) for b in V]
    morphisms = []
    identity = {x: C.identity[x] for x in C.objects}
    for m, s, t in C.morphisms:
        morphisms.append((m, s, t))
    for m, s, t in B.morphisms:
        if s in vset and t in vset:
            morphisms.append((_v_mor(m), _v_obj(s), _v_obj(t)))
    for b in V:
        identity[_v_obj(b)] = _v_mor(B.identity[b])
    cross = {}
    for y in vx:
        for x in C.objects:
            for alpha in C.hom(x, cr(y)):
                morphisms.append((_cross_mor(alpha, y), x, _v_obj(y)))
                cross[_cross_mor(alpha, y)] = (alpha, y)

    compose = {}
    for (g, f2), h in C.compose.items():
        compose[(g, f2)] = h
    vmors = [(m, s, t) for m, s, t in B.morphisms if s in vset and t in vset]
    for (m1, s1, t1) in vmors:
        for (m2, s2, t2) in vmors:
            if t1 == s2:
                compose[(_v_mor(m2), _v_mor(m1))] = _v_mor(B.compose[(m2, m1)])
    # cross ∘ C
    for y in vx:
        for x in C.objects:
            for alpha in C.hom(x, cr(y)):
                for x0 in C.objects:
                    for beta in C.hom(x0, x):
                        compose[(_cross_mor(alpha, y), beta)] = \
                            _cross_mor(C.compose[(alpha, beta)], y)
    # V ∘ cross: β: y -> z in B with y, z in V∩X
    for (m, s, t) in vmors:
        if s in xset:
            crm = c.morphism_map[w.r.morphism_map[m]]
            for x in C.objects:
                for alpha in C.hom(x, cr(s)):
                    compose[(_v_mor(m), _cross_mor(alpha, s))] = \
                        _cross_mor(C.compose[(crm, alpha)], t)
    D = validate_category(objects, morphisms, identity, compose, caps)

    j = Functor(C, D, {x: x for x in C.objects}, {m: m for m in C.morphism_ids}).validate()
    d_ob = {}
    for b in B.objects:
        d_ob[b] = c.object_map[preimage_obj[b]] if b in image else _v_obj(b)
    d_mor = {}
    for m, s, t in B.morphisms:
        if s in vset and t in vset:
            d_mor[m] = _v_mor(m)
        elif m in preimage_mor:
            d_mor[m] = c.morphism_map[preimage_mor[m]]
        else:
            # s in image, t in V∩X; value is c(r(m)) tagged at t
            alpha = c.morphism_map[w.r.morphism_map[m]]
            d_mor[m] = _cross_mor(alpha, t)
    d = Functor(B, D, d_ob, d_mor).validate()
    for a in A.morphism_ids:
        if d.morphism_map[i.morphism_map[a]] != j.morphism_map[c.morphism_map[a]]:
            raise GcatError("dwyer pushout cocone does not commute")
    return DwyerPushout(D, j, d, cross)


def equivariant_dwyer_pushout(act_A: MonoidActionCat, act_B: MonoidActionCat,
                              act_C: MonoidActionCat, i: Functor, c: Functor,
                              w: DwyerWitness, caps: SizeCaps = DEFAULT_CAPS):
    """dwyer_pushout with the induced G-action; returns (action, j, d).

    All inputs must be equivariant and the witness equivariant and normalized.
    """
    if w.group is None:
        raise EquivarianceViolation("witness carries no equivariance data")
    G = w.group
    check_equivariant(i, act_A, act_B)
    check_equivariant(c, act_A, act_C)
    w.validate()
    po = dwyer_pushout(act_A.carrier, act_B.carrier, act_C.carrier, i, c, w, caps)
    D = po.category
    B, C = act_B.carrier, act_C.carrier
    image = set(i.object_map.values())
    vset = {b for b in B.objects if b not in image}

    def act_functor(g):
        om = {}
        mm = {}
        for x in C.objects:
            om[x] = act_C.ob(g, x)
        for b in vset:
            om[_v_obj(b)] = _v_obj(act_B.ob(g, b))
        for m in C.morphism_ids:
            mm[m] = act_C.mor(g, m)
        for m, s, t in B.morphisms:
            if s in vset and t in vset:
                mm[_v_mor(m)] = _v_mor(act_B.mor(g, m))
        for mid, (alpha, y) in po.cross.items():
            mm[mid] = _cross_mor(act_C.mor(g, alpha), act_B.ob(g, y))
        return Functor(D, D, om, mm)

    action = MonoidActionCat(G, D, {g: act_functor(g) for g in G.elements}).validate()
    check_equivariant(po.leg_from_c, act_C, action)
    check_equivariant(po.leg_from_b, act_B, action)
    return action, po


# ---------------------------------------------------------------------------
# closure transports


def restrict_witness_to_fixed(w: DwyerWitness, H: FinGroup) -> DwyerWitness:
    """The witness (X^H, f^H, r^H, ε^H) for i^H: A^H -> B^H."""
    if w.group is None:
        raise EquivarianceViolation("witness carries no equivariance data")
    AH = fixed_category(restrict_action(w.act_A, H), H)
    BH = fixed_category(restrict_action(w.act_B, H), H)
    actX = {g: Functor(w.X, w.X,
                       {x: w.act_B.ob(g, x) for x in w.X.objects},
                       {m: w.act_B.mor(g, m) for m in w.X.morphism_ids})
            for g in H.elements}
    XH = fixed_category(MonoidActionCat(H, w.X, actX).validate(), H)
    iH = Functor(AH, BH, {a: w.i.object_map[a] for a in AH.objects},
                 {m: w.i.morphism_map[m] for m in AH.morphism_ids}).validate()
    fH = Functor(AH, XH, {a: w.f.object_map[a] for a in AH.objects},
                 {m: w.f.morphism_map[m] for m in AH.morphism_ids}).validate()
    rH = Functor(XH, AH, {x: w.r.object_map[x] for x in XH.objects},
                 {m: w.r.morphism_map[m] for m in XH.morphism_ids}).validate()
    unit = NatTrans(identity_functor(AH), fH.then(rH),
                    {a: w.unit.components[a] for a in AH.objects})
    counit = NatTrans(rH.then(fH), identity_functor(XH),
                      {x: w.counit.components[x] for x in XH.objects})
    return DwyerWitness(iH, tuple(sorted(XH.objects)), XH, fH, rH,
                        unit, counit).validate()


def product_witness(S: FinCat, w: DwyerWitness, act_S: Optional[MonoidActionCat] = None,
                    caps: SizeCaps = DEFAULT_CAPS) -> DwyerWitness:
    """Witness for S × i : S × A -> S × B."""
    A, B = w.i.source, w.i.target
    SA = product_category(S, A, caps)
    SB = product_category(S, B, caps)
    SX = SB.full_subcategory([pair_obj(s, x) for s in S.objects for x in w.X.objects])
    ids = identity_functor(S)
    i2 = product_functor(ids, w.i, SA, SB)
    f2 = Functor(SA, SX, i2.object_map, i2.morphism_map)
    r2 = Functor(SX, SA,
                 {pair_obj(s, x): pair_obj(s, w.r.object_map[x])
                  for s in S.objects for x in w.X.objects},
                 {pair_mor(m, n): pair_mor(m, w.r.morphism_map[n])
                  for m in S.morphism_ids for n in w.X.morphism_ids})
    unit = NatTrans(identity_functor(SA), f2.then(r2),
                    {pair_obj(s, a): pair_mor(S.identity[s], w.unit.components[a])
                     for s in S.objects for a in A.objects})
    counit = NatTrans(r2.then(f2), identity_functor(SX),
                      {pair_obj(s, x): pair_mor(S.identity[s], w.counit.components[x])
                       for s in S.objects for x in w.X.objects})
    group = act_A2 = act_B2 = None
    if w.group is not None and act_S is not None:
        group = w.group
        actA2 = {g: product_functor(act_S.act[g], w.act_A.act[g], SA, SA) for g in group.elements}
        actB2 = {g: product_functor(act_S.act[g], w.act_B.act[g], SB, SB) for g in group.elements}
        act_A2 = MonoidActionCat(group, SA, actA2).validate()
        act_B2 = MonoidActionCat(group, SB, actB2).validate()
    return DwyerWitness(i2, tuple(sorted(SX.objects)), SX, f2, r2, unit, counit,
                        group, act_A2, act_B2).validate()


def fun_witness(T: FinCat, w: DwyerWitness, caps: SizeCaps = DEFAULT_CAPS,
                data=None) -> tuple:
    """Witness for Fun(T, i): Fun(T,A) -> Fun(T,B); returns (witness, data dict).

    data, when given, caches the FunctorCategoryData for A, B, X.
    """
    A, B, X = w.i.source, w.i.target, w.X
    if data is None:
        data = {}
        data["A"] = functor_category_data(T, A, caps)
        data["B"] = functor_category_data(T, B, caps)
        data["X"] = functor_category_data(T, X, caps)
    dA, dB, dX = data["A"], data["B"], data["X"]
    incl = inclusion_functor(X, B)
    i2 = postcompose_on_fun(dA, dB, w.i)
    f2 = postcompose_on_fun(dA, dX, w.f)
    r2 = postcompose_on_fun(dX, dA, w.r)
    inc2 = postcompose_on_fun(dX, dB, incl)
    # the cosieve: functors through X, as a full subcategory of Fun(T,B)
    x_objs = sorted(inc2.object_map.values())
    X2 = dB.cat.full_subcategory(x_objs)
    f2X = Functor(dA.cat, X2, {k: inc2.object_map[v] for k, v in f2.object_map.items()},
                  {k: inc2.morphism_map[v] for k, v in f2.morphism_map.items()})
    rename_ob = {inc2.object_map[x]: x for x in dX.cat.objects}
    rename_mor = {inc2.morphism_map[m]: m for m in dX.cat.morphism_ids}
    r2X = Functor(X2, dA.cat, {x: r2.object_map[rename_ob[x]] for x in X2.objects},
                  {m: r2.morphism_map[rename_mor[m]] for m in X2.morphism_ids})
    unit = NatTrans(identity_functor(dA.cat), f2X.then(r2X),
                    {o: dA.cat.identity[o] for o in dA.cat.objects})
    eps = {}
    for x2 in X2.objects:
        F = dX.functor_of(rename_ob[x2])
        comp = {t: w.counit.components[F.object_map[t]] for t in T.objects}
        src_idx = dX.index_of[F.then(w.r).then(w.f).signature()]
        dst_idx = dX.index_of[F.signature()]
        mid = dX.trans_id(src_idx, dst_idx, comp)
        eps[x2] = rename_mor_inv(inc2, mid)
    counit = NatTrans(r2X.then(f2X), identity_functor(X2), eps)
    w2 = DwyerWitness(i2, tuple(x_objs), X2, f2X, r2X, unit, counit).validate()
    return w2, data


def rename_mor_inv(inc2: Functor, mid):
    return inc2.morphism_map[mid]


def monoid_dwyer_check(i: Functor, act_A: MonoidActionCat, act_B: MonoidActionCat,
                       caps: SizeCaps = DEFAULT_CAPS) -> Optional[DwyerWitness]:
    """Dwyer witness equivariant for the maximal subgroup of the acting monoid."""
    M = act_A.monoid
    core = units_group(M)
    rA = restrict_action(act_A, core)
    rB = restrict_action(act_B, core)
    return find_dwyer_witness(i, (core, rA, rB), caps)


# ---------------------------------------------------------------------------
# cross-check against the presentation oracle


def pushout_cross_check(A: FinCat, B: FinCat, C: FinCat, i: Functor, c: Functor,
                        w: DwyerWitness, word_cap: int = 16,
                        caps: SizeCaps = DEFAULT_CAPS):
    """Compare dwyer_pushout with presented_pushout via the canonical functor.

    Returns (agree: bool, DwyerPushout, PresentedPushout); raises Inconclusive
    when the oracle does not close.
    """
    from .fincat import is_isomorphism_functor, presented_pushout

    po = dwyer_pushout(A, B, C, i, c, w, caps)
    res = presented_pushout(A, B, C, i, c, word_cap, caps)
    D1, D2 = res.category, po.category
    ob_map = {}
    for x in C.objects:
        ob_map[res.leg_from_c.object_map[x]] = po.leg_from_c.object_map[x]
    for b in B.objects:
        ob_map[res.leg_from_b.object_map[b]] = po.leg_from_b.object_map[b]

    def eval_gen(gen):
        tag, m = gen
        return po.leg_from_b.morphism_map[m] if tag == "B" else po.leg_from_c.morphism_map[m]

    mor_map = {}
    for mid in D1.morphism_ids:
        word = res.word_of[mid]
        if not word:
            mor_map[mid] = D2.identity[ob_map[D1.src[mid]]]
        else:
            val = eval_gen(word[0])
            for gen in word[1:]:
                val = D2.compose[(eval_gen(gen), val)]
            mor_map[mid] = val
    F = Functor(D1, D2, ob_map, mor_map)
    return is_isomorphism_functor(F), po, res
