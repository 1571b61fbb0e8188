from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import fs
from oracles import all_functions, quotient_classes
from procosheaf.abelian import AbMap, FpAbGroup
from procosheaf.finsets import SETS, FinSet, SetMap, all_maps
from procosheaf.plus import h0_refinement_map
from procosheaf.precosheaf import h0
from procosheaf.pro import (
    CofilteredIndex,
    ProMor,
    ProObj,
    cofiltered_limit,
    coequalizer_pro,
    coproduct,
    hom_pro,
    hom_pro_normalize,
    is_epi,
    is_epi_probe,
    is_iso,
    kappa_eval,
    kappa_map,
)
from procosheaf.shape import LocallyConstantSpec, locally_constant
from procosheaf.site import Covering, RefinementMapping, finest_covering, named_space

Z2 = FinSet((0, 1))
ZZ = FpAbGroup.cyclic(0)


def chain_example():
    xm, xt = fs("a", "b", "c"), fs("a", "b")
    bond = SetMap(xm, xt, ("a", "b", "b"))
    return ProObj("sets", CofilteredIndex.chain(["m", "t"]), {"m": xm, "t": xt}, {("m", "t"): bond})


def test_index_needs_lower_bounds():
    with pytest.raises(ValueError):
        CofilteredIndex(("p", "q"))
    ix = CofilteredIndex(("s", "t", "m"), frozenset({("m", "s"), ("m", "t")}))
    assert ix.least == "m"


def test_index_rejects_cycles():
    with pytest.raises(ValueError):
        CofilteredIndex(("p", "q"), frozenset({("p", "q"), ("q", "p")}))


def test_bonds_must_compose():
    a, b, c = fs(1, 2), fs(1, 2), fs(1)
    with pytest.raises(ValueError):
        ProObj(
            "sets", CofilteredIndex.chain(["i", "j", "k"]), {"i": a, "j": b, "k": c},
            {("i", "j"): SetMap(a, b, (2, 1)), ("j", "k"): SetMap(b, c, (1, 1)),
             ("i", "k"): SetMap(a, c, (1, 1)), ("i", "i"): SetMap(a, a, (2, 1))},
        )


def test_hom_pro_constant_sets():
    x = ProObj.constant(fs("a", "b"))
    assert len(hom_pro(x, x)) == 4


def test_hom_pro_chain_against_brute_colimit():
    x = chain_example()
    y = ProObj.constant(Z2)
    # oracle: colimit of Hom(X_t, Z) -> Hom(X_m, Z) as a quotient of the disjoint union
    hm = [("m", tuple(sorted(f.items()))) for f in all_functions(["a", "b", "c"], [0, 1])]
    ht = [("t", tuple(sorted(f.items()))) for f in all_functions(["a", "b"], [0, 1])]
    bond = {"a": "a", "b": "b", "c": "b"}
    pairs = [(("t", f), ("m", tuple(sorted((k, dict(f)[bond[k]]) for k in "abc")))) for _, f in ht]
    assert len(quotient_classes(hm + ht, pairs)) == 8
    assert len(hom_pro(x, y)) == 8
    assert len(kappa_eval(x, Z2)) == 8


def test_hom_pro_coprime_groups():
    assert len(hom_pro(ProObj.constant(FpAbGroup.cyclic(2)), ProObj.constant(FpAbGroup.cyclic(3)))) == 1


def test_hom_pro_rejects_mixed_bases():
    with pytest.raises(ValueError):
        hom_pro(ProObj.constant(fs(1)), ProObj.constant(FpAbGroup.cyclic(2)))


@st.composite
def pro_sets(draw):
    """Pro-sets on the index m <= s, m <= t, or a chain, with levels of size <= 3."""
    shape = draw(st.sampled_from(["single", "chain", "vee"]))
    if shape == "single":
        return ProObj.constant(FinSet(tuple(range(draw(st.integers(0, 3))))))
    sizes = [draw(st.integers(0, 3)) for _ in range(3)]
    names = ["m", "s", "t"]
    levels = {n: FinSet(tuple(f"{n}{k}" for k in range(sz))) for n, sz in zip(names, sizes)}

    def rand_map(a, b):
        if not b:
            return SetMap(a, b, ()) if not a else None
        return SetMap(a, b, tuple(draw(st.sampled_from(b.elements)) for _ in a))

    if shape == "chain":
        st_ = rand_map(levels["s"], levels["t"])
        ms = rand_map(levels["m"], levels["s"])
        if st_ is None or ms is None:
            return ProObj.constant(levels["m"])
        bonds = {("m", "s"): ms, ("s", "t"): st_}
        return ProObj("sets", CofilteredIndex.chain(names), levels, bonds)
    ms, mt = rand_map(levels["m"], levels["s"]), rand_map(levels["m"], levels["t"])
    if ms is None or mt is None:
        return ProObj.constant(levels["m"])
    ix = CofilteredIndex(tuple(names), frozenset({("m", "s"), ("m", "t")}))
    return ProObj("sets", ix, levels, {("m", "s"): ms, ("m", "t"): mt})


@given(pro_sets(), pro_sets())
def test_hom_formula_matches_normal_forms(x, y):
    fams = hom_pro(x, y)
    normal = [hom_pro_normalize(x, y, f) for f in fams]
    assert len(set(normal)) == len(normal)
    assert set(normal) == set(SETS.hom(x.normal, y.normal))


def test_from_levels_normalizes():
    x = chain_example()
    y = ProObj.constant(Z2)
    f = ProMor.from_levels(x, y, {0: ("t", SetMap(x.levels["t"], Z2, (0, 1)))})
    assert f.rep.images == (0, 1, 1)


def test_coproduct_examples():
    total, inj = coproduct([ProObj.constant(fs("a")), ProObj.constant(fs("b", "c"))])
    assert len(total.normal) == 3
    empty, _ = coproduct([], base="abelian")
    assert empty.normal.is_trivial()
    total, _ = coproduct([ProObj.constant(FpAbGroup.cyclic(2)), ProObj.constant(ZZ)])
    assert total.normal.invariant_factors == (2, 0)


def test_coproduct_needs_base_when_empty():
    with pytest.raises(ValueError):
        coproduct([])


@given(pro_sets(), pro_sets(), st.integers(1, 3))
def test_coproduct_universal_property(x1, x2, zsize):
    total, inj = coproduct([x1, x2])
    z = ProObj.constant(FinSet(tuple(range(zsize))))
    homs = hom_pro(total, z)
    pairs = set()
    for fam in homs:
        h = ProMor(total, z, hom_pro_normalize(total, z, fam))
        pairs.add((inj[0].then(h).rep, inj[1].then(h).rep))
    assert len(pairs) == len(homs) == len(hom_pro(x1, z)) * len(hom_pro(x2, z))


def test_coequalizer_pro_examples():
    ab = ProObj.constant(fs("a", "b"))
    q, _ = coequalizer_pro(ProMor.identity(ab), ProMor.identity(ab))
    assert len(q.normal) == 2
    p = ProObj.constant(fs("p"))
    q, _ = coequalizer_pro(ProMor(p, ab, SetMap(p.normal, ab.normal, ("a",))),
                           ProMor(p, ab, SetMap(p.normal, ab.normal, ("b",))))
    assert len(q.normal) == 1
    z = ProObj.constant(ZZ)
    q, _ = coequalizer_pro(ProMor(z, z, AbMap(ZZ, ZZ, ((3,),))), ProMor(z, z, AbMap(ZZ, ZZ, ((1,),))))
    assert q.normal.invariant_factors == (2,)


def test_coequalizer_pro_rejects_non_parallel():
    a, b = ProObj.constant(fs(1)), ProObj.constant(fs(1, 2))
    with pytest.raises(ValueError):
        coequalizer_pro(ProMor.identity(a), ProMor(a, b, SetMap(a.normal, b.normal, (1,))))


@st.composite
def set_pairs(draw):
    s = FinSet(tuple(range(draw(st.integers(0, 3)))))
    t = FinSet(tuple(f"t{k}" for k in range(draw(st.integers(1, 3)))))
    f = SetMap(s, t, tuple(draw(st.sampled_from(t.elements)) for _ in s))
    g = SetMap(s, t, tuple(draw(st.sampled_from(t.elements)) for _ in s))
    return f, g


@given(set_pairs(), st.integers(1, 3))
def test_kappa_turns_coequalizers_into_equalizers(pair, zsize):
    f, g = pair
    x, y = ProObj.constant(f.source), ProObj.constant(f.target)
    q, proj = coequalizer_pro(ProMor(x, y, f), ProMor(x, y, g))
    z = FinSet(tuple(range(zsize)))
    equalizer = [h for h in kappa_eval(y, z) if f.then(h) == g.then(h)]
    pulled = kappa_map(proj, z)
    assert sorted(map(repr, pulled.images)) == sorted(map(repr, equalizer))
    assert pulled.is_injective()


def test_cofiltered_limit_examples():
    a = ProObj.constant(fs(1, 2))
    value, cone = cofiltered_limit(CofilteredIndex.single(), {0: a}, {})
    assert value is a
    b = ProObj.constant(fs(1))
    ab = ProMor(a, b, SetMap(a.normal, b.normal, (1, 1)))
    value, cone = cofiltered_limit(CofilteredIndex.chain(["A", "B"]), {"A": a, "B": b}, {("A", "B"): ab})
    assert value is a and cone["B"] is ab


def test_cofiltered_limit_of_h0_values_is_the_finest():
    space = named_space("sierpinski")
    a = locally_constant(space, LocallyConstantSpec("sets", fs("s")))
    x = space.total
    fine = finest_covering(space, x)
    coarse = Covering(x, (x,))
    r = RefinementMapping(fine, coarse, (0, 0))
    ix = CofilteredIndex.chain(["fine", "coarse"])
    objects = {"fine": h0(a, fine).value, "coarse": h0(a, coarse).value}
    value, cone = cofiltered_limit(ix, objects, {("fine", "coarse"): h0_refinement_map(r, a)})
    assert len(value.normal) == 1
    # cone check: for small test sets W, maps W -> limit match compatible cones
    for n in range(3):
        w = FinSet(tuple(range(n)))
        cones = [
            (p, q)
            for p in all_maps(w, objects["fine"].normal)
            for q in all_maps(w, objects["coarse"].normal)
            if p.then(cone["coarse"].rep) == q
        ]
        assert len(cones) == len(all_maps(w, value.normal))


@given(st.lists(st.integers(1, 3), min_size=2, max_size=3), st.integers(1, 3), st.data())
def test_kappa_turns_cofiltered_limits_into_colimits(sizes, zsize, data):
    names = [f"k{i}" for i in range(len(sizes))]
    objs = {n: ProObj.constant(FinSet(tuple(range(s)))) for n, s in zip(names, sizes)}
    morphs = {}
    for a, b in zip(names, names[1:]):
        tgt = objs[b].normal
        imgs = tuple(data.draw(st.sampled_from(tgt.elements)) for _ in objs[a].normal)
        morphs[(a, b)] = ProMor(objs[a], objs[b], SetMap(objs[a].normal, tgt, imgs))
    ix = CofilteredIndex.chain(names)
    if len(names) == 3:
        morphs[(names[0], names[2])] = morphs[(names[0], names[1])].then(morphs[(names[1], names[2])])
    value, _ = cofiltered_limit(ix, objs, morphs)
    z = FinSet(tuple(range(zsize)))
    universe = [(n, h) for n in names for h in kappa_eval(objs[n], z)]
    pairs = [((b, h), (a, morphs[(a, b)].rep.then(h))) for (a, b) in morphs for h in kappa_eval(objs[b], z)]
    assert len(quotient_classes(universe, pairs)) == len(kappa_eval(value, z))


def test_kappa_examples():
    assert len(kappa_eval(ProObj.constant(fs("a", "b")), Z2)) == 4
    assert len(kappa_eval(ProObj.constant(ZZ), FpAbGroup.cyclic(2))) == 2
    with pytest.raises(ValueError):
        kappa_eval(ProObj.constant(ZZ), ZZ)


def test_is_epi_examples():
    ab, star = ProObj.constant(fs("a", "b")), ProObj.constant(fs("*"))
    a = ProObj.constant(fs("a"))
    assert is_epi(ProMor(ab, star, SetMap(ab.normal, star.normal, ("*", "*"))), verify=True)
    assert not is_epi(ProMor(a, ab, SetMap(a.normal, ab.normal, ("a",))), verify=True)
    z = ProObj.constant(ZZ)
    assert not is_epi(ProMor(z, z, AbMap(ZZ, ZZ, ((2,),))), verify=True)


@given(set_pairs())
def test_set_epi_routes_agree(pair):
    f, _ = pair
    x, y = ProObj.constant(f.source), ProObj.constant(f.target)
    assert is_epi_probe(ProMor(x, y, f)) == f.is_surjective()


def test_is_iso_examples():
    ab, star = ProObj.constant(fs("a", "b")), ProObj.constant(fs("*"))
    assert is_iso(ProMor.identity(ab))
    assert not is_iso(ProMor(ab, star, SetMap(ab.normal, star.normal, ("*", "*"))))
    z4 = ProObj.constant(FpAbGroup.cyclic(4))
    assert is_iso(ProMor(z4, z4, AbMap(z4.normal, z4.normal, ((3,),))))


def test_abelian_coproduct_kappa_is_product():
    parts = [ProObj.constant(FpAbGroup.cyclic(2)), ProObj.constant(FpAbGroup.cyclic(4))]
    total, inj = coproduct(parts)
    for n in (2, 3, 4):
        z = FpAbGroup.cyclic(n)
        pulled = {tuple(i.rep.then(h) for i in inj) for h in kappa_eval(total, z)}
        expected = set(product(*(kappa_eval(p, z).elements for p in parts)))
        assert pulled == expected
