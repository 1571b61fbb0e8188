"""Pro-objects over finite sets and finitely presented abelian groups.

Only finite cofiltered index posets are represented.  Such a poset has a
least element ``m`` and every pro-object is isomorphic to its level ``X_m``
(the *normal form*).  Morphisms therefore store a single base morphism
between normal forms; :func:`hom_pro` still evaluates the lim-colim formula
level by level so that the shortcut can be checked against it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Hashable, Mapping, Sequence

from .abelian import AB, FpAbGroup
from .finsets import SETS, FinSet, SetMap, UnionFind

BASES = {"sets": SETS, "abelian": AB}


def category(base: str):
    try:
        return BASES[base]
    except KeyError:
        raise ValueError(f"unknown base category {base!r}; expected one of {sorted(BASES)}") from None


def base_of(obj) -> str:
    if isinstance(obj, FinSet):
        return "sets"
    if isinstance(obj, FpAbGroup):
        return "abelian"
    raise TypeError(f"{obj!r} is not a finite set or a finitely presented group")


@dataclass(frozen=True)
class CofilteredIndex:
    """A finite poset in which every pair has a lower bound.

    ``order`` lists pairs ``(i, j)`` meaning ``i <= j``; it is closed
    reflexively and transitively on construction.
    """

    elements: tuple[Hashable, ...]
    order: frozenset = frozenset()

    def __post_init__(self):
        elems = tuple(self.elements)
        if not elems:
            raise ValueError("an index needs at least one element")
        if len(set(elems)) != len(elems):
            raise ValueError("duplicate index elements")
        rel = {(i, i) for i in elems} | set(self.order)
        for i, j in rel:
            if i not in elems or j not in elems:
                raise ValueError(f"order pair {(i, j)!r} mentions unknown elements")
        changed = True
        while changed:
            extra = {(i, l) for i, j in rel for k, l in rel if j == k} - rel
            rel |= extra
            changed = bool(extra)
        for i, j in rel:
            if i != j and (j, i) in rel:
                raise ValueError(f"{i!r} and {j!r} are mutually below each other")
        object.__setattr__(self, "elements", elems)
        object.__setattr__(self, "order", frozenset(rel))
        lows = [m for m in elems if all((m, i) in rel for i in elems)]
        if not lows:
            raise ValueError("index is not cofiltered: some pair has no lower bound")
        object.__setattr__(self, "_least", lows[0])

    @property
    def least(self):
        return self._least

    def leq(self, i, j) -> bool:
        return (i, j) in self.order

    def pairs(self) -> list[tuple]:
        """Comparable pairs ``i <= j`` in a deterministic order."""
        pos = {x: k for k, x in enumerate(self.elements)}
        return sorted(self.order, key=lambda p: (pos[p[0]], pos[p[1]]))

    @classmethod
    def single(cls) -> "CofilteredIndex":
        return cls((0,))

    @classmethod
    def chain(cls, elements: Sequence) -> "CofilteredIndex":
        """``elements[0] <= elements[1] <= ...``."""
        return cls(tuple(elements), frozenset(zip(elements, elements[1:])))

    @classmethod
    def product(cls, indexes: Sequence["CofilteredIndex"]) -> "CofilteredIndex":
        elems = tuple(product(*(ix.elements for ix in indexes)))
        order = frozenset(
            (a, b) for a in elems for b in elems
            if all(ix.leq(x, y) for ix, x, y in zip(indexes, a, b))
        )
        return cls(elems, order)


@dataclass(frozen=True, eq=False)
class ProObj:
    """A diagram ``levels: index -> base`` with ``bonds[(i, j)]: X_i -> X_j`` for ``i <= j``."""

    base: str
    index: CofilteredIndex
    levels: Mapping
    bonds: Mapping = field(default_factory=dict)

    def __post_init__(self):
        cat = category(self.base)
        for i in self.index.elements:
            if not cat.is_object(self.levels.get(i)):
                raise ValueError(f"level {i!r} is not a {self.base} object")
        bonds = dict(self.bonds)
        for i in self.index.elements:
            bonds.setdefault((i, i), cat.identity(self.levels[i]))
        for i, j in self.index.pairs():
            if (i, j) not in bonds:
                k = next(
                    (k for k in self.index.elements
                     if k not in (i, j) and self.index.leq(i, k) and self.index.leq(k, j)
                     and (i, k) in bonds and (k, j) in bonds),
                    None,
                )
                if k is None:
                    raise ValueError(f"missing bond {(i, j)!r}")
                bonds[(i, j)] = cat.compose(bonds[(k, j)], bonds[(i, k)])
        for (i, j), b in bonds.items():
            if not self.index.leq(i, j):
                raise ValueError(f"bond {(i, j)!r} does not follow the order")
            if b.source != self.levels[i] or b.target != self.levels[j]:
                raise ValueError(f"bond {(i, j)!r} has the wrong endpoints")
        # identities filled in above need no checking, nor do squares through them
        given = set(self.bonds)
        for i, j in self.index.pairs():
            if i == j and (i, i) in given and not cat.equal(bonds[(i, i)], cat.identity(self.levels[i])):
                raise ValueError(f"bond {(i, i)!r} is not the identity")
            for k in self.index.elements:
                if (i == j and (i, i) not in given) or (j == k and (j, j) not in given):
                    continue
                if self.index.leq(j, k) and not cat.equal(
                    cat.compose(bonds[(j, k)], bonds[(i, j)]), bonds[(i, k)]
                ):
                    raise ValueError(f"bonds {(i, j)!r}, {(j, k)!r} do not compose")
        object.__setattr__(self, "bonds", bonds)

    @classmethod
    def constant(cls, obj, base: str | None = None) -> "ProObj":
        base = base or base_of(obj)
        return cls(base, CofilteredIndex.single(), {0: obj})

    @property
    def cat(self):
        return category(self.base)

    @property
    def normal(self):
        """The level at the least index, to which the pro-object is isomorphic."""
        return self.levels[self.index.least]

    def __repr__(self):
        return f"ProObj({self.base}, levels={len(self.index.elements)}, normal={self.normal!r})"


@dataclass(frozen=True, eq=False)
class ProMor:
    source: ProObj
    target: ProObj
    rep: object

    def __post_init__(self):
        if self.source.base != self.target.base:
            raise ValueError("morphism between pro-objects over different bases")
        if self.rep.source != self.source.normal or self.rep.target != self.target.normal:
            raise ValueError("representative does not connect the normal forms")

    @classmethod
    def identity(cls, x: ProObj) -> "ProMor":
        return cls(x, x, x.cat.identity(x.normal))

    @classmethod
    def from_levels(cls, source: ProObj, target: ProObj, family: Mapping) -> "ProMor":
        """Normalize a level-wise family ``j -> (i, f: X_i -> Y_j)``.

        The family must be compatible: for ``j <= j'`` the two composites
        agree after pulling back to the least source level.
        """
        cat = source.cat
        m = source.index.least

        def at_least(j):
            i, f = family[j]
            return cat.compose(f, source.bonds[(m, i)])

        for j, jj in target.index.pairs():
            if not cat.equal(cat.compose(target.bonds[(j, jj)], at_least(j)), at_least(jj)):
                raise ValueError(f"family is not compatible along {(j, jj)!r}")
        return cls(source, target, at_least(target.index.least))

    def then(self, other: "ProMor") -> "ProMor":
        if other.source is not self.target and other.source.normal != self.target.normal:
            raise ValueError("morphisms are not composable")
        return ProMor(self.source, other.target, self.source.cat.compose(other.rep, self.rep))

    def __eq__(self, other):
        if not isinstance(other, ProMor):
            return NotImplemented
        return self.source.cat.equal(self.rep, other.rep)

    def __hash__(self):
        return hash(self.rep)


def _same_base(objs: Sequence[ProObj], base: str | None = None) -> str:
    bases = {x.base for x in objs} | ({base} if base else set())
    if len(bases) > 1:
        raise ValueError(f"mixed base categories: {sorted(bases)}")
    if not bases:
        raise ValueError("cannot infer the base category of an empty diagram")
    return bases.pop()


def hom_pro(x: ProObj, y: ProObj) -> FinSet:
    """``lim_j colim_i Hom(X_i, Y_j)``, evaluated literally.

    The colimit over ``i`` is the disjoint union of hom-sets modulo
    ``f ~ f o bond(i', i)``; the limit over ``j`` is the set of compatible
    families.  Each family is returned as a tuple over ``y.index.elements``
    of class representatives ``(i, f)``, preferring the least source level.
    """
    base = _same_base([x, y])
    cat = category(base)
    for j in y.index.elements:
        if not cat.is_finite(y.levels[j]):
            raise ValueError("hom_pro needs finite target levels")
    ix, jx = x.index, y.index
    m = ix.least
    colims = {}
    for j in jx.elements:
        universe = [(i, f) for i in ix.elements for f in cat.hom(x.levels[i], y.levels[j])]
        uf = UnionFind(sorted(universe, key=lambda p: p[0] != m))
        for i2, i in ix.pairs():
            if i2 == i:
                continue
            for f in cat.hom(x.levels[i], y.levels[j]):
                uf.union((i, f), (i2, cat.compose(f, x.bonds[(i2, i)])))
        colims[j] = uf
    families = [()]
    for j in jx.elements:
        reps = colims[j].roots()
        grown = []
        for fam in families:
            for r in reps:
                cand = fam + (r,)
                if _compatible(cand, jx, x, y, colims, cat):
                    grown.append(cand)
        families = grown
    return FinSet(tuple(families))


def _compatible(fam, jx, x, y, colims, cat) -> bool:
    chosen = dict(zip(jx.elements, fam))
    for j, jj in jx.pairs():
        if j in chosen and jj in chosen and j != jj:
            i, f = chosen[j]
            pushed = (i, cat.compose(y.bonds[(j, jj)], f))
            if colims[jj].find(pushed) != colims[jj].find(chosen[jj]):
                return False
    return True


def hom_pro_normalize(x: ProObj, y: ProObj, family: tuple) -> object:
    """The base morphism of normal forms named by a :func:`hom_pro` family."""
    cat = x.cat
    i, f = dict(zip(y.index.elements, family))[y.index.least]
    return cat.compose(f, x.bonds[(x.index.least, i)])


def coproduct(parts: Sequence[ProObj], base: str | None = None) -> tuple[ProObj, list[ProMor]]:
    """Levelwise coproduct over the product of the part indexes.

    The empty coproduct is the constant initial object; ``base`` is then
    required.
    """
    base = _same_base(parts, base)
    cat = category(base)
    index = CofilteredIndex.product([p.index for p in parts])
    levels, injections_at = {}, {}
    for k in index.elements:
        total, inj = cat.coproduct([p.levels[i] for p, i in zip(parts, k)])
        levels[k], injections_at[k] = total, inj
    bonds = {}
    for a, b in index.pairs():
        maps = [
            cat.compose(injections_at[b][n], p.bonds[(i, j)])
            for n, (p, i, j) in enumerate(zip(parts, a, b))
        ]
        bonds[(a, b)] = cat.copair(levels[a], maps, levels[b])
    total = ProObj(base, index, levels, bonds)
    least = index.least
    injections = [ProMor(p, total, injections_at[least][n]) for n, p in enumerate(parts)]
    return total, injections


def copair(total: ProObj, maps: Sequence[ProMor], target: ProObj) -> ProMor:
    cat = total.cat
    return ProMor(total, target, cat.copair(total.normal, [f.rep for f in maps], target.normal))


def coequalizer_pro(f: ProMor, g: ProMor) -> tuple[ProObj, ProMor]:
    """Coequalizer on normal forms (``coker(f - g)`` in the abelian case)."""
    if f.source.normal != g.source.normal or f.target.normal != g.target.normal:
        raise ValueError("coequalizer needs a parallel pair")
    cat = f.source.cat
    q, proj, _ = cat.coequalizer(f.rep, g.rep)
    qq = ProObj.constant(q, f.source.base)
    return qq, ProMor(f.target, qq, proj)


def cofiltered_limit(
    index: CofilteredIndex, objects: Mapping, morphisms: Mapping
) -> tuple[ProObj, dict]:
    """Limit of a finite cofiltered diagram of pro-objects with its cone.

    ``morphisms[(k, l)]`` is the :class:`ProMor` ``D(k) -> D(l)`` for ``k <= l``.
    Flattening the diagram gives an index with a least element, the pair
    ``(least k, least level of D(k))``, so the limit is ``D(least)``.
    """
    least = index.least
    value = objects[least]
    cone = {}
    for k in index.elements:
        if k == least:
            cone[k] = ProMor.identity(value)
        else:
            cone[k] = morphisms[(least, k)]
    return value, cone


def _check_probe(z, base: str):
    cat = category(base)
    if not cat.is_object(z):
        raise ValueError(f"probe {z!r} is not a {base} object")
    if not cat.is_finite(z):
        raise ValueError(f"probe {z} is infinite")


def kappa_eval(x: ProObj, z) -> FinSet:
    """``Hom(X, Z)`` for a finite base object ``Z``; atoms are base morphisms."""
    _check_probe(z, x.base)
    return FinSet(tuple(x.cat.hom(x.normal, z)))


def kappa_map(f: ProMor, z, source_hom: FinSet | None = None, target_hom: FinSet | None = None) -> SetMap:
    """Precomposition ``Hom(Y, Z) -> Hom(X, Z)`` by ``f: X -> Y``."""
    cat = f.source.cat
    th = target_hom if target_hom is not None else kappa_eval(f.target, z)
    sh = source_hom if source_hom is not None else kappa_eval(f.source, z)
    return SetMap(th, sh, tuple(cat.compose(h, f.rep) for h in th))


def is_epi_probe(f: ProMor) -> bool:
    """Epi test through the embedding: precomposition is injective at every probe."""
    for z in f.source.cat.epi_probes(f.rep):
        if not kappa_map(f, z).is_injective():
            return False
    return True


def is_epi(f: ProMor, verify: bool = True) -> bool:
    """Surjectivity (sets) / trivial cokernel (abelian) of the normal representative.

    The probe route of :func:`is_epi_probe` is computed alongside and a
    disagreement raises ``AssertionError``; ``verify=False`` skips it.
    """
    direct = f.source.cat.is_epi(f.rep)
    if verify:
        probe = is_epi_probe(f)
        if probe != direct:
            raise AssertionError(f"epi routes disagree: direct={direct}, probe={probe}")
    return direct


def is_iso(f: ProMor) -> bool:
    return f.source.cat.is_iso(f.rep)


def set_probes(sizes: Sequence[int] = (1, 2, 3)) -> list[FinSet]:
    return [FinSet(tuple(range(n))) for n in sizes]


def ab_probes(orders: Sequence[int] = (2, 3, 4)) -> list[FpAbGroup]:
    return [FpAbGroup.cyclic(n) for n in orders]


def default_probes(base: str) -> list:
    return set_probes() if base == "sets" else ab_probes()
