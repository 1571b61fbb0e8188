"""Finite sets, set maps, and the colimit kernels the pro layer needs."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations, product
from typing import Hashable, Iterable, Sequence


@dataclass(frozen=True)
class FinSet:
    """An ordered finite set of hashable atoms.

    Order only matters for deterministic output; equality is on the ordered
    tuple so that two FinSets are interchangeable exactly when indexing is.
    """

    elements: tuple[Hashable, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if len(set(self.elements)) != len(self.elements):
            raise ValueError(f"duplicate atoms in {self.elements!r}")

    @cached_property
    def index(self) -> dict[Hashable, int]:
        return {x: i for i, x in enumerate(self.elements)}

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.index

    def __repr__(self):
        return f"FinSet({list(self.elements)!r})"


@dataclass(frozen=True)
class SetMap:
    """A total function ``source -> target``; ``images`` is aligned with ``source``."""

    source: FinSet
    target: FinSet
    images: tuple[Hashable, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if len(self.images) != len(self.source):
            raise ValueError(
                f"assignment covers {len(self.images)} of {len(self.source)} source atoms"
            )
        for y in self.images:
            if y not in self.target:
                raise ValueError(f"image {y!r} is not in the target {self.target!r}")

    @classmethod
    def from_dict(cls, source: FinSet, target: FinSet, assignment: dict) -> "SetMap":
        missing = [x for x in source if x not in assignment]
        if missing:
            raise ValueError(f"assignment undefined on {missing!r}")
        return cls(source, target, tuple(assignment[x] for x in source))

    @classmethod
    def identity(cls, s: FinSet) -> "SetMap":
        return cls(s, s, s.elements)

    def __call__(self, x):
        return self.images[self.source.index[x]]

    def then(self, other: "SetMap") -> "SetMap":
        """``other o self``."""
        if other.source != self.target:
            raise ValueError("maps are not composable")
        return SetMap(self.source, other.target, tuple(other(y) for y in self.images))

    def as_dict(self) -> dict:
        return dict(zip(self.source.elements, self.images))

    def is_injective(self) -> bool:
        return len(set(self.images)) == len(self.images)

    def is_surjective(self) -> bool:
        return set(self.images) == set(self.target.elements)

    def is_bijective(self) -> bool:
        return len(self.source) == len(self.target) and self.is_injective()


class UnionFind:
    """Disjoint sets over a fixed ordered universe.

    The root of a class is always its earliest element in universe order,
    which makes class representatives deterministic.
    """

    def __init__(self, universe: Sequence[Hashable]):
        self.order = {x: i for i, x in enumerate(universe)}
        self.parent = {x: x for x in universe}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if self.order[ry] < self.order[rx]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        return True

    def roots(self) -> list:
        return [x for x in self.order if self.find(x) == x]


def coequalizer_set(f: SetMap, g: SetMap) -> tuple[FinSet, SetMap]:
    """Quotient of ``f.target`` by the equivalence generated by ``f(x) ~ g(x)``.

    Each class is represented by its first atom in target order.
    """
    if f.source != g.source or f.target != g.target:
        raise ValueError("coequalizer needs a parallel pair")
    uf = UnionFind(f.target.elements)
    for a, b in zip(f.images, g.images):
        uf.union(a, b)
    q = FinSet(uf.roots())
    return q, SetMap(f.target, q, tuple(uf.find(y) for y in f.target))


def disjoint_union(parts: Sequence[FinSet]) -> tuple[FinSet, list[SetMap]]:
    """Coproduct with atoms tagged ``(k, x)`` by the position ``k`` of the part."""
    total = FinSet(tuple((k, x) for k, part in enumerate(parts) for x in part))
    injections = [
        SetMap(part, total, tuple((k, x) for x in part)) for k, part in enumerate(parts)
    ]
    return total, injections


def cartesian_product(a: FinSet, b: FinSet) -> FinSet:
    return FinSet(tuple(product(a.elements, b.elements)))


def all_maps(source: FinSet, target: FinSet) -> list[SetMap]:
    return [SetMap(source, target, imgs) for imgs in product(target.elements, repeat=len(source))]


class SetCategory:
    """Finite sets as a base category for pro-objects.

    The pro layer and the precosheaf algorithms are written against this
    method set; :class:`procosheaf.abelian.AbCategory` mirrors it.
    """

    name = "sets"

    def is_object(self, x) -> bool:
        return isinstance(x, FinSet)

    def identity(self, x: FinSet) -> SetMap:
        return SetMap.identity(x)

    def compose(self, g: SetMap, f: SetMap) -> SetMap:
        return f.then(g)

    def initial(self) -> FinSet:
        return FinSet()

    def is_initial(self, x: FinSet) -> bool:
        return len(x) == 0

    def is_finite(self, x: FinSet) -> bool:
        return True

    def coproduct(self, parts: Sequence[FinSet]) -> tuple[FinSet, list[SetMap]]:
        return disjoint_union(parts)

    def copair(self, total: FinSet, maps: Sequence[SetMap], target: FinSet) -> SetMap:
        """The map out of ``total`` (a coproduct of the maps' sources) given by ``maps``."""
        return SetMap(total, target, tuple(maps[k](x) for k, x in total.elements))

    def coequalizer(self, f: SetMap, g: SetMap) -> tuple[FinSet, SetMap, SetMap]:
        """``(Q, proj, section)`` with ``proj o section == id``."""
        q, proj = coequalizer_set(f, g)
        return q, proj, SetMap(q, f.target, q.elements)

    def equal(self, f: SetMap, g: SetMap) -> bool:
        return f == g

    def is_iso(self, f: SetMap) -> bool:
        return f.is_bijective()

    def is_epi(self, f: SetMap) -> bool:
        return f.is_surjective()

    def hom(self, x: FinSet, z: FinSet) -> list[SetMap]:
        return all_maps(x, z)

    def hom_size(self, x: FinSet, z: FinSet) -> int:
        return len(z) ** len(x)

    def isos(self, x: FinSet, y: FinSet) -> Iterable[SetMap]:
        if len(x) != len(y):
            return
        for perm in permutations(y.elements):
            yield SetMap(x, y, perm)

    def factor_through_epi(self, e: SetMap, h: SetMap) -> SetMap | None:
        """The unique ``phi`` with ``phi o e == h`` when ``e`` is surjective."""
        assignment = {}
        for x, y in zip(e.images, h.images):
            if assignment.setdefault(x, y) != y:
                return None
        if len(assignment) != len(e.target):
            return None
        return SetMap.from_dict(e.target, h.target, assignment)

    def size(self, x: FinSet) -> int:
        return len(x)

    def describe(self, x: FinSet) -> dict:
        return {"size": len(x)}

    def epi_probes(self, f: SetMap) -> list[FinSet]:
        return [FinSet((0, 1))]


SETS = SetCategory()
