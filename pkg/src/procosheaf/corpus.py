"""Seeded random precosheaves for property tests and the acceptance run.

Values are built from *germs*: each germ is born at some open and stays
alive on every larger open.  The value on ``U`` is generated by the germs
alive on ``U`` modulo relations inherited from smaller opens plus a few new
ones, so every transition is induced by the identity on germs and
functoriality holds by construction.
"""
from __future__ import annotations

import random
from typing import Iterator

from .abelian import AbMap, FpAbGroup, simplify
from .finsets import FinSet, SetMap, UnionFind
from .precosheaf import Precosheaf
from .site import NAMED_SPACES, FinSpace, named_space


def _alive(space: FinSpace, rng: random.Random, empty_prob: float) -> dict:
    alive, count = {}, 0
    for u in space.opens:
        inherited = dict.fromkeys(g for v in space.hasse_children(u) for g in alive[v])
        if u:
            born = rng.choice([0, 0, 1, 1, 2])
        else:
            born = 1 if rng.random() < empty_prob else 0
        for _ in range(born):
            count += 1
            inherited[f"g{count}"] = None
        alive[u] = list(inherited)
    return alive


def random_set_precosheaf(
    space: FinSpace, rng: random.Random, max_size: int = 3, empty_prob: float = 0.1
) -> Precosheaf:
    """Values have at most ``max_size`` elements; atoms are germ labels."""
    alive = _alive(space, rng, empty_prob)
    classes, objects, maps = {}, {}, {}
    for u in space.opens:
        uf = UnionFind(alive[u])
        for v in space.hasse_children(u):
            for g in alive[v]:
                uf.union(g, classes[v][g])
        if len(alive[u]) > 1 and rng.random() < 0.3:
            uf.union(*rng.sample(alive[u], 2))
        while len(uf.roots()) > max_size:
            uf.union(*rng.sample(uf.roots(), 2))
        classes[u] = {g: uf.find(g) for g in alive[u]}
        objects[u] = FinSet(tuple(uf.roots()))
    for v, u in space.hasse_edges():
        maps[(v, u)] = SetMap(objects[v], objects[u], tuple(classes[u][g] for g in objects[v]))
    return Precosheaf.from_objects(space, "sets", objects, maps)


def random_ab_precosheaf(
    space: FinSpace, rng: random.Random, max_gens: int = 2, empty_prob: float = 0.1
) -> Precosheaf:
    """Values have at most ``max_gens`` invariant factors; torsion orders divide 2, 3 or 4."""
    alive = _alive(space, rng, empty_prob)
    groups, objects, maps, coords = {}, {}, {}, {}
    for u in space.opens:
        gens = alive[u]
        pos = {g: k for k, g in enumerate(gens)}
        n = len(gens)

        def vec(pairs):
            row = [0] * n
            for g, c in pairs:
                row[pos[g]] += c
            return tuple(row)

        rels = []
        for v in space.hasse_children(u):
            for rel in groups[v].relations:
                rels.append(vec(zip(alive[v], rel)))
        for _ in range(rng.choice([0, 1, 1, 2])):
            if not gens:
                break
            kind = rng.random()
            if kind < 0.5:
                rels.append(vec([(rng.choice(gens), rng.choice([2, 3, 4]))]))
            elif kind < 0.8 and n > 1:
                a, b = rng.sample(gens, 2)
                rels.append(vec([(a, 1), (b, -1)]))
            else:
                rels.append(vec([(rng.choice(gens), 1)]))
        g = FpAbGroup(n, tuple(rels))
        while len(g.invariant_factors) > max_gens:
            if n > 1 and rng.random() < 0.5:
                a, b = rng.sample(gens, 2)
                rels.append(vec([(a, 1), (b, -1)]))
            else:
                rels.append(vec([(rng.choice(gens), 1)]))
            g = FpAbGroup(n, tuple(rels))
        groups[u] = g
        objects[u], coords[u], _ = simplify(g)
    for v, u in space.hasse_edges():
        # germ inclusion G_v -> G_u, conjugated into the simplified presentations
        _, _, from_v = simplify(groups[v])
        pos = {g: k for k, g in enumerate(alive[u])}
        cols = [[int(pos[g] == i) for i in range(len(alive[u]))] for g in alive[v]]
        incl = AbMap.from_columns(groups[v], groups[u], cols, check=False)
        maps[(v, u)] = from_v.then(incl).then(coords[u])
    return Precosheaf.from_objects(space, "abelian", objects, maps)


def corpus(
    per_space: int = 20, seed: int = 0, bases: tuple[str, ...] = ("sets", "abelian"),
    spaces: tuple[str, ...] = NAMED_SPACES,
) -> Iterator[tuple[str, Precosheaf]]:
    """``per_space`` seeded instances per space and base, labelled ``space/base/k``."""
    for name in spaces:
        space = named_space(name)
        for base in bases:
            make = random_set_precosheaf if base == "sets" else random_ab_precosheaf
            for k in range(per_space):
                rng = random.Random(f"{seed}/{name}/{base}/{k}")
                yield f"{name}/{base}/{k}", make(space, rng)
