"""Locally constant precosheaves and the component cosheaves that cosheafify them."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .abelian import AB, AbMap, FpAbGroup, direct_sum, hom_group
from .finsets import SETS, FinSet, SetMap, all_maps, cartesian_product
from .plus import sharp
from .precosheaf import PcMor, Precosheaf, find_isomorphism
from .site import FinSpace, Open, pi0


@dataclass(frozen=True)
class LocallyConstantSpec:
    """``base`` is ``"sets"`` with a :class:`FinSet` datum or ``"abelian"`` with a group."""

    base: str
    datum: object

    def __post_init__(self):
        if self.base == "sets" and not isinstance(self.datum, FinSet):
            raise TypeError("a set spec needs a FinSet datum")
        if self.base == "abelian" and not isinstance(self.datum, FpAbGroup):
            raise TypeError("an abelian spec needs an FpAbGroup datum")
        if self.base not in ("sets", "abelian"):
            raise ValueError(f"unknown base {self.base!r}")

    def __str__(self):
        if self.base == "sets":
            return f"S = {list(self.datum.elements)}"
        return f"A = {self.datum}"


def locally_constant(space: FinSpace, spec: LocallyConstantSpec) -> Precosheaf:
    """The datum on every nonempty open, the initial object on the empty one."""
    cat = SETS if spec.base == "sets" else AB
    objects = {u: spec.datum if u else cat.initial() for u in space.opens}
    maps = {}
    for v, u in space.hasse_edges():
        if v:
            maps[(v, u)] = cat.identity(spec.datum)
        elif spec.base == "sets":
            maps[(v, u)] = SetMap(objects[v], objects[u], ())
        else:
            maps[(v, u)] = AbMap.zero(objects[v], objects[u])
    return Precosheaf.from_objects(space, spec.base, objects, maps)


def _component_index(space: FinSpace, u: Open, v: Open) -> list[int]:
    """For ``u <= v``: position in ``pi0(v)`` of the component containing each component of ``u``."""
    comps_v = pi0(space, v).elements
    return [next(k for k, d in enumerate(comps_v) if c[0] in d) for c in pi0(space, u)]


def pro_pi0_cosheaf(space: FinSpace, s: FinSet) -> Precosheaf:
    """``U -> S x pi0(U)`` with components sent to the components containing them."""
    objects = {u: cartesian_product(s, pi0(space, u)) for u in space.opens}
    maps = {}
    for v, u in space.hasse_edges():
        comps_u = pi0(space, u).elements
        where = dict(zip(pi0(space, v).elements, _component_index(space, v, u)))
        maps[(v, u)] = SetMap(
            objects[v], objects[u], tuple((x, comps_u[where[c]]) for x, c in objects[v])
        )
    return Precosheaf.from_objects(space, "sets", objects, maps)


def pro_h0_cosheaf(space: FinSpace, a: FpAbGroup) -> Precosheaf:
    """``U -> sum over pi0(U) of A`` with summands added along component inclusions."""
    objects, injections = {}, {}
    for u in space.opens:
        objects[u], injections[u] = direct_sum([a] * len(pi0(space, u)))
    maps = {}
    for v, u in space.hasse_edges():
        idx = _component_index(space, v, u)
        maps[(v, u)] = AB.copair(objects[v], [injections[u][k] for k in idx], objects[u])
    return Precosheaf.from_objects(space, "abelian", objects, maps)


def component_cosheaf(space: FinSpace, spec: LocallyConstantSpec) -> Precosheaf:
    if spec.base == "sets":
        return pro_pi0_cosheaf(space, spec.datum)
    return pro_h0_cosheaf(space, spec.datum)


@dataclass(frozen=True, eq=False)
class Theorem5Report:
    """Outcome of comparing the cosheafified locally constant precosheaf with the component cosheaf."""

    ok: bool
    space: str
    spec: str
    values: dict
    iso: PcMor | None = None
    counterexample: str | None = None

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "space": self.space,
            "spec": self.spec,
            "values": self.values,
            "counterexample": self.counterexample,
        }


def verify_theorem5(space: FinSpace, spec: LocallyConstantSpec, budget: int = 10**5) -> Theorem5Report:
    """Search for a precosheaf isomorphism between ``(datum^LC)#`` and the component cosheaf."""
    a_sharp, _ = sharp(locally_constant(space, spec))
    target = component_cosheaf(space, spec)
    cat = a_sharp.cat
    values = {
        space.label(u): {
            "sharp": cat.describe(a_sharp.obj(u)),
            "components": cat.describe(target.obj(u)),
        }
        for u in space.opens
    }
    for u in space.opens:
        if cat.describe(a_sharp.obj(u)) != cat.describe(target.obj(u)):
            return Theorem5Report(False, space.name, str(spec), values,
                                  counterexample=f"values differ on {space.label(u)}")
    iso = find_isomorphism(a_sharp, target, budget)
    if iso is None:
        return Theorem5Report(False, space.name, str(spec), values,
                              counterexample="no natural isomorphism")
    return Theorem5Report(True, space.name, str(spec), values, iso=iso)


def locally_constant_functions(space: FinSpace, u: Open, values: FinSet) -> FinSet:
    """Functions ``u -> values`` constant on every minimal open, as tuples over the points of ``u``.

    The points of ``u`` are taken in space order.
    """
    pts = space.sort_points(u)
    pos = {p: k for k, p in enumerate(pts)}
    out = []
    for f in product(values.elements, repeat=len(pts)):
        if all(f[pos[y]] == f[pos[x]] for x in pts for y in space.minimal_open(x)):
            out.append(f)
    return FinSet(tuple(out))


def cech_h0_dual(space: FinSpace, u: Open, a: FpAbGroup, z: FpAbGroup) -> FinSet:
    """Locally constant functions ``u -> Hom(A, Z)``."""
    return locally_constant_functions(space, u, hom_group(a, z))


def pi0_dual(space: FinSpace, u: Open, s: FinSet, z: FinSet) -> FinSet:
    """Locally constant functions ``u -> Z^S``."""
    return locally_constant_functions(space, u, FinSet(tuple(all_maps(s, z))))
