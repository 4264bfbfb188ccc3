"""Seeded corpus generation: random small posets, group actions on them, and
Dwyer spans with verified witnesses.

The generator is biased toward posets and chaotic categories because exact
expectations exist there.  All randomness flows through an explicit seed;
identical seeds give identical corpora.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Optional

from .config import DEFAULT_CAPS, SizeCaps
from .errors import GcatError
from .fincat import (
    FinCat,
    Functor,
    Poset,
    identity_functor,
    poset_from_relation,
    terminal_category,
)
from .actions import (
    FinGroup,
    MonoidActionCat,
    chaotic_action,
    chaotic_category,
    chaotic_mor,
    cyclic_group,
    subgroups,
    symmetric_group,
    trivial_action,
    trivial_group,
)
from .dwyer import DwyerWitness, find_dwyer_witness


@dataclass(eq=False)
class DwyerSpan:
    """A span C <-c- A -i-> B with an (optionally equivariant) Dwyer witness."""

    A: FinCat
    B: FinCat
    C: FinCat
    i: Functor
    c: Functor
    witness: DwyerWitness
    group: Optional[FinGroup] = None
    act_A: Optional[MonoidActionCat] = None
    act_B: Optional[MonoidActionCat] = None
    act_C: Optional[MonoidActionCat] = None
    label: str = ""


def named_group(name: str) -> FinGroup:
    if name in ("1", "triv"):
        return trivial_group()
    if name.startswith("Z"):
        return cyclic_group(int(name[1:]))
    if name.startswith("S"):
        return symmetric_group(int(name[1:]))
    raise GcatError(f"unknown group name {name!r}")


def seeded_poset(rng: random.Random, max_elems=5) -> Poset:
    n = rng.randint(1, max_elems)
    els = [f"p{i}" for i in range(n)]
    pairs = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.4:
                pairs.append((els[i], els[j]))
    return poset_from_relation(els, pairs)


def seeded_g_poset(rng: random.Random, G: FinGroup, max_total=12):
    """A G-poset built as copies of a base poset indexed by a G-set, with an
    optional G-fixed bottom cone point."""
    base = seeded_poset(rng, 3)
    subs = subgroups(G)
    orbit_subgroups = []
    total = 0
    while True:
        K = rng.choice(subs)
        size = len(G.elements) // len(K.elements)
        if total + size * len(base.elements) > max_total:
            break
        orbit_subgroups.append(K)
        total += size * len(base.elements)
        if rng.random() < 0.5 or total >= max_total - 1:
            break
    if not orbit_subgroups:
        orbit_subgroups = [G]
    cone = rng.random() < 0.5

    # sheet index set: disjoint cosets, tagged per orbit
    sheets = []
    sheet_act = {}
    for oi, K in enumerate(orbit_subgroups):
        cosets = sorted({min(G.mul(g, k) for k in K.elements) for g in G.elements})
        for c in cosets:
            sheets.append(f"o{oi}.{c}")
        for g in G.elements:
            for c in cosets:
                tgt = min(G.mul(G.mul(g, c), k) for k in K.elements)
                sheet_act.setdefault(g, {})[f"o{oi}.{c}"] = f"o{oi}.{tgt}"

    els = [f"{s}.{p}" for s in sheets for p in base.elements]
    pairs = [(f"{s}.{p}", f"{s}.{q}") for s in sheets for p, q in base.leq if p != q]
    if cone:
        els.append("bot")
        pairs.extend(("bot", e) for e in els if e != "bot")
    P = poset_from_relation(els, pairs)
    cat = P.to_fincat()

    def act_fun(g):
        om = {}
        for s in sheets:
            for p in base.elements:
                om[f"{s}.{p}"] = f"{sheet_act[g][s]}.{p}"
        if cone:
            om["bot"] = "bot"
        mm = {}
        for m, s, t in cat.morphisms:
            mm[m] = f"{om[s]}<={om[t]}"
        return Functor(cat, cat, om, mm)

    action = MonoidActionCat(G, cat, {g: act_fun(g) for g in G.elements}).validate()
    return action


def _downward_g_stable(rng, act: MonoidActionCat):
    cat = act.carrier
    G = act.monoid
    chosen = set()
    for x in cat.objects:
        if rng.random() < 0.45:
            chosen.add(x)
    changed = True
    while changed:
        changed = False
        for x in list(chosen):
            for g in G.elements:
                y = act.ob(g, x)
                if y not in chosen:
                    chosen.add(y)
                    changed = True
            for m, s, t in cat.morphisms:
                if t in chosen and s not in chosen:
                    chosen.add(s)
                    changed = True
    return sorted(chosen)


def _sub_action(act: MonoidActionCat, objs):
    sub = act.carrier.full_subcategory(objs)
    G = act.monoid
    funs = {g: Functor(sub, sub,
                       {x: act.ob(g, x) for x in sub.objects},
                       {m: act.mor(g, m) for m in sub.morphism_ids})
            for g in G.elements}
    return MonoidActionCat(G, sub, funs).validate()


def seeded_dwyer_span(rng: random.Random, G: Optional[FinGroup] = None,
                      caps: SizeCaps = DEFAULT_CAPS) -> Optional[DwyerSpan]:
    """Propose a random span and keep it only when the witness search succeeds."""
    group = G if G is not None else trivial_group()
    act_B = seeded_g_poset(rng, group)
    B = act_B.carrier
    a_objs = _downward_g_stable(rng, act_B)
    if not a_objs or len(a_objs) == len(B.objects):
        return None
    act_A = _sub_action(act_B, a_objs)
    A = act_A.carrier
    i = Functor(A, B, {x: x for x in A.objects}, {m: m for m in A.morphism_ids}).validate()
    w = find_dwyer_witness(i, (group, act_A, act_B), caps)
    if w is None:
        return None

    style = rng.choice(["collapse", "identity", "cone", "chaotic"])
    if style == "chaotic" and len(a_objs) > 4:
        # chaotic targets on many objects make cap-3 nerves needlessly large
        style = "collapse"
    if style == "collapse":
        C = terminal_category()
        act_C = trivial_action(group, C)
        c = Functor(A, C, {x: "*" for x in A.objects},
                    {m: "id*" for m in A.morphism_ids}).validate()
    elif style == "identity":
        C, act_C = A, act_A
        c = identity_functor(A)
    elif style == "cone":
        els = list(A.objects) + ["top"]
        pairs = [(s, t) for m, s, t in A.morphisms] + [(x, "top") for x in A.objects]
        P = poset_from_relation(els, pairs)
        C = P.to_fincat()
        funs = {}
        for g in group.elements:
            om = {x: act_A.ob(g, x) for x in A.objects}
            om["top"] = "top"
            mm = {m: f"{om[s]}<={om[t]}" for m, s, t in C.morphisms}
            funs[g] = Functor(C, C, om, mm)
        act_C = MonoidActionCat(group, C, funs).validate()
        c = Functor(A, C, {x: x for x in A.objects},
                    {m: f"{s}<={t}" for m, s, t in A.morphisms}).validate()
    else:
        elem_act = {g: {x: act_A.ob(g, x) for x in A.objects} for g in group.elements}
        act_C = chaotic_action(group, elem_act)
        C = act_C.carrier
        c = Functor(A, C, {x: x for x in A.objects},
                    {m: chaotic_mor(s, t) for m, s, t in A.morphisms}).validate()

    from .actions import check_equivariant
    check_equivariant(c, act_A, act_C)
    return DwyerSpan(A, B, C, i, c, w, group, act_A, act_B, act_C, label=style)


def dwyer_span_corpus(seed: int, count: int, group_name: Optional[str] = None,
                      caps: SizeCaps = DEFAULT_CAPS):
    """Deterministic list of `count` verified spans for the given group."""
    rng = random.Random(seed)
    G = named_group(group_name) if group_name else None
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 200 * count:
            raise GcatError(f"span generation stalled after {attempts} attempts")
        span = seeded_dwyer_span(rng, G, caps)
        if span is not None:
            out.append(span)
    return out


def curated_spans():
    """The two curated pushout cases: gluing to [2] and the collapse to [1]."""
    from .fincat import arrow_category, chain_poset

    one = terminal_category()
    arrow = arrow_category()
    i0 = Functor(one, arrow, {"*": "0"}, {"id*": "0<=0"}).validate()
    w = find_dwyer_witness(i0)
    triv = trivial_group()
    spans = []
    c_at1 = Functor(one, arrow, {"*": "1"}, {"id*": "1<=1"}).validate()
    spans.append(("glue-[2]", DwyerSpan(one, arrow, arrow, i0, c_at1, w), chain_poset(2).to_fincat()))
    c_cl = Functor(one, one, {"*": "*"}, {"id*": "id*"}).validate()
    spans.append(("collapse-[1]", DwyerSpan(one, arrow, one, i0, c_cl, w), arrow))
    return spans


def seeded_category(rng: random.Random, caps: SizeCaps = DEFAULT_CAPS) -> FinCat:
    """A random small category: poset, chaotic, or a delooping."""
    kind = rng.choice(["poset", "poset", "chaotic", "delooping"])
    if kind == "poset":
        return seeded_poset(rng, 5).to_fincat()
    if kind == "chaotic":
        n = rng.randint(1, 4)
        return chaotic_category([f"x{i}" for i in range(n)])
    from .actions import delooping
    return delooping(cyclic_group(rng.choice([2, 3])))


def emap_corpus(cap=3):
    """Simplicial sets for the Ex-unit certificates (plain part)."""
    from .sset import (
        boundary_complex,
        complex_to_sset,
        horn_complex,
        nerve,
        standard_simplex_complex,
    )
    from .fincat import arrow_category

    vposet = poset_from_relation(["a", "b", "c"], [("a", "c"), ("b", "c")]).to_fincat()
    return [
        ("D0", complex_to_sset(standard_simplex_complex(0), cap)),
        ("D1", complex_to_sset(standard_simplex_complex(1), cap)),
        ("bD1", complex_to_sset(boundary_complex(1), cap)),
        ("bD2", complex_to_sset(boundary_complex(2), cap)),
        ("L2_1", complex_to_sset(horn_complex(2, 1), cap)),
        ("N[1]", nerve(arrow_category(), cap)),
        ("N(V)", nerve(vposet, cap)),
    ]


def emap_equivariant_corpus(cap=3):
    """(action, label): nerves with Z/2-actions for the equivariant Ex-unit checks."""
    from .sset import equivariant_nerve

    Z2 = cyclic_group(2)
    out = []
    vposet = poset_from_relation(["a", "b", "c"], [("a", "c"), ("b", "c")])
    cat = vposet.to_fincat()
    om = {"a": "b", "b": "a", "c": "c"}
    swap = Functor(cat, cat, om, {m: f"{om[s]}<={om[t]}" for m, s, t in cat.morphisms})
    actV = MonoidActionCat(Z2, cat, {"c0": identity_functor(cat), "c1": swap}).validate()
    out.append(("N(V)-swap", equivariant_nerve(actV, cap)))
    disc = chaotic_action(Z2, {"c0": {"a": "a", "b": "b"}, "c1": {"a": "b", "b": "a"}})
    # free swap on the discrete two-point set (nerve of the discrete category)
    from .fincat import discrete_category
    dc = discrete_category(["a", "b"])
    sw = Functor(dc, dc, {"a": "b", "b": "a"}, {"id:a": "id:b", "id:b": "id:a"})
    actD = MonoidActionCat(Z2, dc, {"c0": identity_functor(dc), "c1": sw}).validate()
    out.append(("discrete-swap", equivariant_nerve(actD, cap)))
    arrow = poset_from_relation(["0", "1"], [("0", "1")]).to_fincat()
    out.append(("N[1]-trivial", equivariant_nerve(trivial_action(Z2, arrow), cap)))
    return out
