"""Group-valued precosheaves: cosheafification sums over components; costalks sit at minimal opens."""
from procosheaf import FpAbGroup, LocallyConstantSpec, costalk, locally_constant, named_space, sharp, smoothness_certificate

for name in ("discrete2", "pseudocircle"):
    space = named_space(name)
    a = locally_constant(space, LocallyConstantSpec("abelian", FpAbGroup.cyclic(0)))
    a_sharp, _ = sharp(a)
    print(name)
    for u in space.opens:
        print(f"  {space.label(u):12} {str(a.obj(u)):6} -> {a_sharp.obj(u)}")

space = named_space("pseudocircle")
a = locally_constant(space, LocallyConstantSpec("abelian", FpAbGroup.from_factors([2, 3])))
print("\ncostalks of Z/6 on the circle")
for x in space.points:
    c = costalk(a, x)
    print(f"  {x}: {c.value.normal}  over {[space.label(v) for v in c.projections]}")

cert = smoothness_certificate(a)
print("\nsmooth via A <- A# -> A#; counit local iso:", cert.local_iso_report.ok, "| global iso:", cert.counit_is_iso)
