"""Integer matrices, the groups they present, and how epimorphisms are detected."""
import numpy as np

from procosheaf import AbMap, FpAbGroup, ProMor, ProObj, cokernel_ab, is_epi, smith_normal_form
from procosheaf.pro import is_epi_probe

m = np.array([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
U, D, V = smith_normal_form(m)
print("diagonal:", np.diag(D).tolist())
print("U M V == D:", np.array_equal(U.dot(m).dot(V), D))

g = FpAbGroup(3, tuple(map(tuple, m.tolist())))
print("Z^3 / rows:", g, "| order", g.order())

z = FpAbGroup.cyclic(0)
for k in (1, -1, 2, 7):
    f = ProMor(ProObj.constant(z), ProObj.constant(z), AbMap(z, z, ((k,),)))
    coker, _ = cokernel_ab(f.rep)
    # the probe route must agree with the cokernel
    print(f"multiply by {k:2}: cokernel {coker}, epi {is_epi(f)}, by probes {is_epi_probe(f)}")
