"""The constant one-point precosheaf on two disjoint points is not a cosheaf."""
from procosheaf import FinSet, LocallyConstantSpec, finest_covering, h0, is_cosheaf, locally_constant, named_space, sharp

space = named_space("discrete2")
a = locally_constant(space, LocallyConstantSpec("sets", FinSet(("*",))))

verdict = is_cosheaf(a)
u, cover = verdict.witness
print("cosheaf:", verdict.ok)
print("fails on", space.label(u), "covered by", [space.label(m) for m in cover.members])

# gluing over the cover keeps the two points apart
res = h0(a, finest_covering(space, space.total))
print("H0 over the cover:", len(res.value.normal), "elements, A(X) has", len(a.obj(space.total)))

a_sharp, counit = sharp(a)
print("A#(X):", len(a_sharp.obj(space.total)))
print("counit on X is iso:", a.cat.is_iso(counit.component(space.total)))
print("A# is a cosheaf:", is_cosheaf(a_sharp).ok)
