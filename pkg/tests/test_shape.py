import pytest
from hypothesis import given, settings, strategies as st

from helpers import fs
from oracles import components, cyclic_hom_count
from procosheaf.abelian import FpAbGroup
from procosheaf.duality import DualPresheaf, is_sheaf
from procosheaf.finsets import FinSet
from procosheaf.plus import sharp
from procosheaf.precosheaf import is_cosheaf
from procosheaf.pro import ab_probes, set_probes
from procosheaf.shape import (
    LocallyConstantSpec,
    cech_h0_dual,
    component_cosheaf,
    locally_constant,
    pi0_dual,
    pro_h0_cosheaf,
    pro_pi0_cosheaf,
    verify_theorem5,
)
from procosheaf.site import NAMED_SPACES, named_space

S = frozenset


def n_components(space, u):
    pts = space.sort_points(u)
    return len(components(pts, lambda x, y: y in space.minimal_open(x) or x in space.minimal_open(y)))


def test_spec_validation():
    with pytest.raises(TypeError):
        LocallyConstantSpec("sets", FpAbGroup.cyclic(2))
    with pytest.raises(TypeError):
        LocallyConstantSpec("abelian", fs("a"))
    assert str(LocallyConstantSpec("abelian", FpAbGroup.from_factors([2, 0]))) == "A = Z/2 + Z"


def test_locally_constant_values():
    sp = named_space("pseudocircle")
    a = locally_constant(sp, LocallyConstantSpec("sets", fs("s", "t")))
    assert len(a.obj(S())) == 0
    for v, u in sp.hasse_edges():
        if v:
            assert a.map(v, u).images == ("s", "t")


@pytest.mark.parametrize("name", NAMED_SPACES)
def test_component_cosheaf_values(name):
    sp = named_space(name)
    p = pro_pi0_cosheaf(sp, fs("s", "t"))
    h = pro_h0_cosheaf(sp, FpAbGroup.from_factors([3]))
    for u in sp.opens:
        k = n_components(sp, u)
        assert len(p.obj(u)) == 2 * k
        assert h.obj(u).order() == 3**k


@pytest.mark.parametrize("name", NAMED_SPACES)
def test_component_cosheaves_satisfy_the_axiom(name):
    sp = named_space(name)
    assert is_cosheaf(pro_pi0_cosheaf(sp, fs("s", "t")))
    assert is_cosheaf(pro_h0_cosheaf(sp, FpAbGroup.from_factors([2, 0])))


@pytest.mark.parametrize("name", NAMED_SPACES)
@pytest.mark.parametrize(
    "spec",
    [
        LocallyConstantSpec("sets", fs("s")),
        LocallyConstantSpec("sets", fs("s", "t", "u")),
        LocallyConstantSpec("abelian", FpAbGroup.cyclic(0)),
        LocallyConstantSpec("abelian", FpAbGroup.from_factors([2, 3])),
    ],
    ids=str,
)
def test_verify_theorem5(name, spec):
    report = verify_theorem5(named_space(name), spec)
    assert report.ok and report.iso is not None and report.iso.is_iso()
    assert report.to_dict()["counterexample"] is None


def test_theorem5_report_detects_a_wrong_target():
    sp = named_space("discrete2")
    spec = LocallyConstantSpec("sets", fs("s"))
    a_sharp, _ = sharp(locally_constant(sp, spec))
    assert len(a_sharp.obj(sp.total)) == 2
    assert len(component_cosheaf(sp, spec).obj(sp.total)) == 2
    assert len(locally_constant(sp, spec).obj(sp.total)) == 1


def test_cech_h0_dual_examples():
    pc = named_space("pseudocircle")
    z2 = FpAbGroup.cyclic(2)
    assert len(cech_h0_dual(pc, pc.total, z2, z2)) == 2
    d2 = named_space("discrete2")
    assert len(cech_h0_dual(d2, d2.total, FpAbGroup.cyclic(0), FpAbGroup.cyclic(3))) == 9
    assert len(cech_h0_dual(d2, S(), FpAbGroup.cyclic(0), FpAbGroup.cyclic(3))) == 1


@pytest.mark.parametrize("name", NAMED_SPACES)
def test_dual_of_component_cosheaf_is_locally_constant_functions(name):
    sp = named_space(name)
    groups = [FpAbGroup.from_factors(f) for f in ([2], [0], [2, 3])]
    for a in groups:
        h = pro_h0_cosheaf(sp, a)
        for z in ab_probes():
            dual = DualPresheaf(h, z)
            for u in sp.opens:
                expected = cyclic_hom_count(a.ngens, a.relations, z.invariant_factors[0]) ** n_components(sp, u)
                assert dual.size(u) == len(cech_h0_dual(sp, u, a, z)) == expected
    s = fs("s", "t")
    p = pro_pi0_cosheaf(sp, s)
    for z in set_probes():
        dual = DualPresheaf(p, z)
        for u in sp.opens:
            assert dual.size(u) == len(pi0_dual(sp, u, s, z))


@settings(max_examples=20)
@given(
    st.sampled_from(NAMED_SPACES),
    st.lists(st.sampled_from([0, 2, 3, 4]), min_size=1, max_size=2),
)
def test_dual_of_component_cosheaf_is_a_sheaf(name, factors):
    sp = named_space(name)
    h = pro_h0_cosheaf(sp, FpAbGroup.from_factors(factors))
    for z in ab_probes():
        assert is_sheaf(DualPresheaf(h, z))


@settings(max_examples=20)
@given(st.sampled_from(NAMED_SPACES), st.integers(1, 2))
def test_dual_of_pi0_cosheaf_is_a_sheaf(name, n):
    sp = named_space(name)
    p = pro_pi0_cosheaf(sp, FinSet(tuple(range(n))))
    for z in set_probes():
        assert is_sheaf(DualPresheaf(p, z))
