"""Finite topological spaces, coverings, and refinement mappings."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, combinations_with_replacement, product
from typing import Iterable, Sequence

from .finsets import FinSet, UnionFind

Open = frozenset


class SpaceError(ValueError):
    """The proposed family of subsets is not a topology."""


@dataclass(frozen=True, eq=False)
class FinSpace:
    """A finite space; build one with :func:`validate_space`.

    ``opens`` is in canonical order: by size, then by the positions of the
    points they contain.  Every algorithm that walks opens uses this order,
    so smaller opens are always visited first.
    """

    points: tuple[str, ...]
    opens: tuple[Open, ...]
    name: str = ""

    @cached_property
    def position(self) -> dict:
        return {p: i for i, p in enumerate(self.points)}

    def open_key(self, u: Open) -> tuple:
        return (len(u), sorted(self.position[p] for p in u))

    def sort_points(self, u: Iterable[str]) -> list[str]:
        return sorted(u, key=self.position.__getitem__)

    @cached_property
    def empty(self) -> Open:
        return frozenset()

    @cached_property
    def total(self) -> Open:
        return frozenset(self.points)

    @cached_property
    def _open_set(self) -> frozenset:
        return frozenset(self.opens)

    def is_open(self, u) -> bool:
        return frozenset(u) in self._open_set

    @cached_property
    def _minimal(self) -> dict:
        return {x: frozenset.intersection(*(u for u in self.opens if x in u)) for x in self.points}

    def minimal_open(self, x: str) -> Open:
        """``U_x``, the smallest open containing ``x``."""
        return self._minimal[x]

    def opens_in(self, u: Open) -> list[Open]:
        return [v for v in self.opens if v <= u]

    @cached_property
    def _children(self) -> dict:
        out = {}
        for u in self.opens:
            proper = [v for v in self.opens if v < u]
            out[u] = [v for v in proper if not any(v < w for w in proper)]
        return out

    def hasse_children(self, u: Open) -> list[Open]:
        """Maximal opens strictly inside ``u``."""
        return self._children[u]

    def hasse_edges(self) -> list[tuple[Open, Open]]:
        return [(v, u) for u in self.opens for v in self._children[u]]

    def label(self, u: Open) -> str:
        return "{" + ",".join(self.sort_points(u)) + "}"

    def __repr__(self):
        return f"FinSpace({self.name or '?'}, points={list(self.points)}, opens={len(self.opens)})"


def validate_space(points: Sequence[str], opens: Iterable[Iterable[str]], name: str = "") -> FinSpace:
    """Check the topology axioms and return the space with opens in canonical order."""
    pts = tuple(points)
    if len(set(pts)) != len(pts):
        raise SpaceError("duplicate points")
    family = set()
    for u in opens:
        fu = frozenset(u)
        unknown = fu - set(pts)
        if unknown:
            raise SpaceError(f"open {sorted(fu)} mentions unknown points {sorted(unknown)}")
        family.add(fu)
    if frozenset() not in family:
        raise SpaceError("the empty set must be open")
    if frozenset(pts) not in family:
        raise SpaceError("the whole space must be open")
    for a, b in combinations(family, 2):
        if a | b not in family:
            raise SpaceError(f"union of {sorted(a)} and {sorted(b)} is not open")
        if a & b not in family:
            raise SpaceError(f"intersection of {sorted(a)} and {sorted(b)} is not open")
    pos = {p: i for i, p in enumerate(pts)}
    ordered = tuple(sorted(family, key=lambda u: (len(u), sorted(pos[p] for p in u))))
    return FinSpace(pts, ordered, name)


@dataclass(frozen=True)
class Covering:
    """An indexed family of opens whose union is ``target``; repeats are allowed."""

    target: Open
    members: tuple[Open, ...]

    def __post_init__(self):
        members = tuple(frozenset(m) for m in self.members)
        object.__setattr__(self, "target", frozenset(self.target))
        object.__setattr__(self, "members", members)
        union = frozenset().union(*members)
        if union != self.target:
            raise ValueError("members do not cover the target")

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class RefinementMapping:
    """``source`` refines ``target`` via ``epsilon``: ``V_j`` lies in ``U_epsilon(j)``."""

    source: Covering
    target: Covering
    epsilon: tuple[int, ...]

    def __post_init__(self):
        eps = tuple(self.epsilon)
        object.__setattr__(self, "epsilon", eps)
        if self.source.target != self.target.target:
            raise ValueError("coverings of different opens")
        if len(eps) != len(self.source.members):
            raise ValueError("epsilon must index every source member")
        for j, i in enumerate(eps):
            if not 0 <= i < len(self.target.members):
                raise ValueError(f"epsilon({j}) = {i} is out of range")
            if not self.source.members[j] <= self.target.members[i]:
                raise ValueError(f"member {j} is not inside target member {i}")


def finest_covering(space: FinSpace, u: Open) -> Covering:
    """``{U_x : x in u}`` without repeats, ordered by the first point producing each member."""
    u = frozenset(u)
    if not space.is_open(u):
        raise ValueError(f"{sorted(u)} is not open")
    members = dict.fromkeys(space.minimal_open(x) for x in space.sort_points(u))
    return Covering(u, tuple(members))


def intersections(c: Covering) -> dict[tuple[int, int], Open]:
    """Pairwise intersections keyed by 0-based member indices, diagonal included."""
    n = len(c.members)
    return {(i, j): c.members[i] & c.members[j] for i in range(n) for j in range(n)}


def pi0(space: FinSpace, u: Open) -> FinSet:
    """Connected components of ``u``; each atom is the tuple of its points in space order.

    Two points of ``u`` are joined when one lies in the minimal open of the
    other, which generates the connectivity relation of a finite space.
    """
    pts = space.sort_points(u)
    uf = UnionFind(pts)
    for x in pts:
        for y in space.minimal_open(x):
            uf.union(x, y)
    comps: dict = {}
    for x in pts:
        comps.setdefault(uf.find(x), []).append(x)
    return FinSet(tuple(tuple(c) for c in comps.values()))


def component_of(space: FinSpace, u: Open, x: str) -> tuple:
    return next(c for c in pi0(space, u) if x in c)


def coverings(
    space: FinSpace, u: Open, max_members: int = 4, repeats: bool = False
) -> list[Covering]:
    """Coverings of ``u`` by nonempty opens, finest covering first.

    Coverings with at most ``max_members`` members are listed; the finest
    covering is always included.  Members are distinct unless ``repeats``.
    The empty open is covered by the empty family only.
    """
    u = frozenset(u)
    if not u:
        return [Covering(u, ())]
    finest = finest_covering(space, u)
    out = [finest]
    seen = {tuple(sorted(finest.members, key=space.open_key))}
    subs = [v for v in space.opens_in(u) if v]
    choose = combinations_with_replacement if repeats else combinations
    for k in range(1, max_members + 1):
        for combo in choose(subs, k):
            key = tuple(sorted(combo, key=space.open_key))
            if frozenset().union(*combo) == u and key not in seen:
                seen.add(key)
                out.append(Covering(u, combo))
    return out


def refinement_maps(source: Covering, target: Covering) -> list[tuple[int, ...]]:
    """Every ``epsilon`` witnessing that ``source`` refines ``target``."""
    options = [
        [i for i, t in enumerate(target.members) if v <= t] for v in source.members
    ]
    return [tuple(e) for e in product(*options)]


def enumerate_refinement_pairs(
    space: FinSpace, u: Open, budget: int = 200, max_members: int = 3
) -> list[tuple[RefinementMapping, RefinementMapping]]:
    """Up to ``budget`` pairs of distinct refinement mappings between the same coverings.

    Coverings may repeat members, so that a duplicated member offers two
    destinations.  For each (source, target) the first and last refinement
    mappings are paired.
    """
    out = []
    if budget <= 0:
        return out
    covs = coverings(space, u, max_members, repeats=True)
    for src in covs:
        for tgt in covs:
            eps = refinement_maps(src, tgt)
            if len(eps) < 2:
                continue
            out.append((RefinementMapping(src, tgt, eps[0]), RefinementMapping(src, tgt, eps[-1])))
            if len(out) >= budget:
                return out
    return out


def named_space(name: str) -> FinSpace:
    """One of the small test spaces used throughout the package."""
    spaces = {
        "point": (["pt"], [[], ["pt"]]),
        "sierpinski": (["x", "y"], [[], ["y"], ["x", "y"]]),
        "discrete2": (["p", "q"], [[], ["p"], ["q"], ["p", "q"]]),
        "discrete3": (
            ["p", "q", "r"],
            [s for k in range(4) for s in map(list, combinations(["p", "q", "r"], k))],
        ),
        "indiscrete2": (["p", "q"], [[], ["p", "q"]]),
        # open points a, b; closed points c, d, each in the closure of both
        "pseudocircle": (
            ["a", "b", "c", "d"],
            [[], ["a"], ["b"], ["a", "b"], ["a", "b", "c"], ["a", "b", "d"], ["a", "b", "c", "d"]],
        ),
    }
    if name not in spaces:
        raise KeyError(f"unknown space {name!r}; known: {sorted(spaces)}")
    pts, opens = spaces[name]
    return validate_space(pts, opens, name)


NAMED_SPACES = ("point", "sierpinski", "discrete2", "discrete3", "indiscrete2", "pseudocircle")
