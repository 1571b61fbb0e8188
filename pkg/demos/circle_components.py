"""Cosheafify a constant precosheaf on the four-point circle and watch it count components."""
from procosheaf import FinSet, LocallyConstantSpec, locally_constant, named_space, pi0, sharp, verify_theorem5

circle = named_space("pseudocircle")
print(circle)
for u in circle.opens:
    print(f"  {circle.label(u):12} components: {len(pi0(circle, u))}")

# two colours, assigned to every nonempty open
spec = LocallyConstantSpec("sets", FinSet(("red", "blue")))
a = locally_constant(circle, spec)
a_sharp, counit = sharp(a)

print("\nopen          A(U)  A#(U)  counit")
for u in circle.opens:
    iso = "iso" if a.cat.is_iso(counit.component(u)) else "-"
    print(f"  {circle.label(u):12} {len(a.obj(u)):4}  {len(a_sharp.obj(u)):5}  {iso}")

# {a,b} has two components, so A# doubles the colours there
print("\nA#({a,b}) elements:", list(a_sharp.obj(frozenset("ab"))))

report = verify_theorem5(circle, spec)
print("\nisomorphic to colours x components:", report.ok)
