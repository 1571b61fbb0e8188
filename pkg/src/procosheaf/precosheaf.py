"""Precosheaves on finite spaces, their morphisms, costalks and the cosheaf axioms."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Iterator, Mapping

from .finsets import SetMap
from .pro import CofilteredIndex, ProMor, ProObj, category, cofiltered_limit
from .site import Covering, FinSpace, Open, coverings


class BudgetExceeded(RuntimeError):
    """An enumeration ran past its step budget; shrink the instance or raise the budget."""


@dataclass(frozen=True)
class Verdict:
    """A boolean check result with the first counterexample found, if any."""

    ok: bool
    witness: object = None
    checked: int = 0

    def __bool__(self):
        return self.ok


class Precosheaf:
    """A covariant functor from the opens of ``space`` to pro-objects over ``base``.

    ``transitions`` may list only some inclusions (the Hasse edges suffice);
    the rest are filled in by composition.  With ``check`` every
    composable pair is verified.
    """

    def __init__(
        self,
        space: FinSpace,
        base: str,
        values: Mapping[Open, ProObj],
        transitions: Mapping[tuple[Open, Open], ProMor],
        check: bool = True,
    ):
        self.space = space
        self.base = base
        self.cat = category(base)
        self.values = {}
        for u in space.opens:
            if u not in values:
                raise ValueError(f"no value given on {space.label(u)}")
            if values[u].base != base:
                raise ValueError(f"value on {space.label(u)} is not over {base}")
            self.values[u] = values[u]
        for u, v in transitions:
            if not (space.is_open(u) and space.is_open(v) and u <= v):
                raise ValueError(f"transition {(sorted(u), sorted(v))} is not an inclusion of opens")
        self._given = dict(transitions)
        self._h0: dict = {}
        self.transitions = {}
        for u in space.opens:
            for v in space.opens:
                if u <= v:
                    self.transitions[(u, v)] = self._fill(u, v)
        if check:
            self.validate()

    def _fill(self, u: Open, v: Open) -> ProMor:
        if (u, v) in self.transitions:
            return self.transitions[(u, v)]
        if (u, v) in self._given:
            out = self._given[(u, v)]
        elif u == v:
            out = ProMor.identity(self.values[u])
        else:
            w = next(
                (w for w in self.space.opens
                 if u < w <= v and u in self.space.hasse_children(w) and (u, w) in self._given),
                None,
            )
            if w is None:
                raise ValueError(f"missing transition {self.space.label(u)} -> {self.space.label(v)}")
            out = self._given[(u, w)].then(self._fill(w, v))
        self.transitions[(u, v)] = out
        return out

    @classmethod
    def from_objects(
        cls, space: FinSpace, base: str, objects: Mapping[Open, object],
        maps: Mapping[tuple[Open, Open], object], check: bool = True,
    ) -> "Precosheaf":
        """Build from constant values and base morphisms."""
        values = {u: ProObj.constant(objects[u], base) for u in space.opens}
        trans = {(u, v): ProMor(values[u], values[v], f) for (u, v), f in maps.items()}
        return cls(space, base, values, trans, check)

    def validate(self) -> None:
        cat = self.cat
        for u in self.space.opens:
            if not cat.equal(self.transitions[(u, u)].rep, cat.identity(self.obj(u))):
                raise ValueError(f"transition on {self.space.label(u)} is not the identity")
        for (u, v), f in self.transitions.items():
            for w in self.space.opens:
                if v <= w and (u, w) in self.transitions:
                    g = self.transitions[(v, w)]
                    if not cat.equal(cat.compose(g.rep, f.rep), self.transitions[(u, w)].rep):
                        raise ValueError(
                            "transitions do not compose along "
                            f"{self.space.label(u)} <= {self.space.label(v)} <= {self.space.label(w)}"
                        )

    def obj(self, u: Open):
        """Normal form of the value on ``u``."""
        return self.values[frozenset(u)].normal

    def map(self, u: Open, v: Open):
        """Normal representative of the transition ``u -> v``."""
        return self.transitions[(frozenset(u), frozenset(v))].rep

    def describe(self) -> dict:
        return {self.space.label(u): self.cat.describe(self.obj(u)) for u in self.space.opens}

    def __repr__(self):
        return f"Precosheaf({self.space.name or '?'}, {self.base})"


class PcMor:
    """A natural family of components ``source(U) -> target(U)``."""

    def __init__(self, source: Precosheaf, target: Precosheaf, components: Mapping[Open, ProMor], check: bool = True):
        if source.space is not target.space or source.base != target.base:
            raise ValueError("precosheaf morphism across different spaces or bases")
        self.source, self.target = source, target
        self.components = {u: components[u] for u in source.space.opens}
        for u, c in self.components.items():
            if c.rep.source != source.obj(u) or c.rep.target != target.obj(u):
                raise ValueError(f"component on {source.space.label(u)} has the wrong endpoints")
        if check and not self.is_natural():
            raise ValueError("components are not natural")

    @classmethod
    def from_maps(cls, source: Precosheaf, target: Precosheaf, maps: Mapping[Open, object], check: bool = True) -> "PcMor":
        comps = {u: ProMor(source.values[u], target.values[u], maps[u]) for u in source.space.opens}
        return cls(source, target, comps, check)

    @classmethod
    def identity(cls, a: Precosheaf) -> "PcMor":
        return cls(a, a, {u: ProMor.identity(a.values[u]) for u in a.space.opens}, check=False)

    def component(self, u: Open):
        return self.components[frozenset(u)].rep

    def is_natural(self) -> bool:
        cat = self.source.cat
        for v, u in self.source.space.hasse_edges():
            left = cat.compose(self.component(u), self.source.map(v, u))
            right = cat.compose(self.target.map(v, u), self.component(v))
            if not cat.equal(left, right):
                return False
        return True

    def then(self, other: "PcMor") -> "PcMor":
        comps = {u: c.then(other.components[u]) for u, c in self.components.items()}
        return PcMor(self.source, other.target, comps, check=False)

    def is_iso(self) -> bool:
        cat = self.source.cat
        return all(cat.is_iso(c.rep) for c in self.components.values())

    @property
    def key(self) -> tuple:
        return tuple(self.components[u].rep for u in self.source.space.opens)

    def __eq__(self, other):
        return isinstance(other, PcMor) and self.key == other.key

    def __hash__(self):
        return hash(self.key)


@dataclass(frozen=True, eq=False)
class Costalk:
    point: str
    value: ProObj
    projections: dict = field(default_factory=dict)


def costalk(a: Precosheaf, x: str) -> Costalk:
    """Limit of the values over the neighbourhoods of ``x``, with its cone."""
    space = a.space
    if x not in space.position:
        raise KeyError(f"unknown point {x!r}")
    nbhds = [u for u in space.opens if x in u]
    index = CofilteredIndex(tuple(nbhds), frozenset((u, v) for u in nbhds for v in nbhds if u <= v))
    objects = {u: a.values[u] for u in nbhds}
    value, cone = cofiltered_limit(index, objects, a.transitions)
    return Costalk(x, value, cone)


# -- H0 of a covering ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class H0Result:
    """Coequalizer of the two maps ``sum A(U_i & U_j) => sum A(U_i)`` and its map to ``A(U)``.

    ``pieces``/``injections`` are the coproduct of the members' values,
    ``proj`` and ``section`` the base-level quotient map and a section of it.
    """

    covering: Covering
    value: ProObj
    from_pieces: ProMor
    to_target: ProMor
    pieces: object
    injections: list
    section: object

    @property
    def proj(self):
        return self.from_pieces.rep


def h0(a: Precosheaf, c: Covering) -> H0Result:
    """Computed once per covering and kept on ``a``."""
    if c not in a._h0:
        a._h0[c] = _h0(a, c)
    return a._h0[c]


def _h0(a: Precosheaf, c: Covering) -> H0Result:
    cat = a.cat
    if not a.space.is_open(c.target) or any(not a.space.is_open(m) for m in c.members):
        raise ValueError("covering does not live on the precosheaf's space")
    members = c.members
    n = len(members)
    total, inj = cat.coproduct([a.obj(m) for m in members])
    # the pairs (j, i) and (i, i) add no relations beyond those of (i, j), i < j
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    overlaps = [members[i] & members[j] for i, j in pairs]
    o_total, _ = cat.coproduct([a.obj(w) for w in overlaps])
    left = cat.copair(
        o_total,
        [cat.compose(inj[i], a.map(w, members[i])) for (i, _), w in zip(pairs, overlaps)],
        total,
    )
    right = cat.copair(
        o_total,
        [cat.compose(inj[j], a.map(w, members[j])) for (_, j), w in zip(pairs, overlaps)],
        total,
    )
    q, proj, section = cat.coequalizer(left, right)
    canonical = cat.copair(total, [a.map(m, c.target) for m in members], a.obj(c.target))
    value = ProObj.constant(q, a.base)
    pieces = ProObj.constant(total, a.base)
    return H0Result(
        covering=c,
        value=value,
        from_pieces=ProMor(pieces, value, proj),
        to_target=ProMor(value, a.values[c.target], cat.compose(canonical, section)),
        pieces=total,
        injections=inj,
        section=section,
    )


def canonical_map(a: Precosheaf, c: Covering):
    """``sum_i A(U_i) -> A(U)`` assembled from the transitions."""
    cat = a.cat
    total, _ = cat.coproduct([a.obj(m) for m in c.members])
    return cat.copair(total, [a.map(m, c.target) for m in c.members], a.obj(c.target))


def is_coseparated(a: Precosheaf, max_members: int = 4) -> Verdict:
    """Every canonical map out of a covering's pieces is epi; witness ``(U, covering)``."""
    checked = 0
    for u in a.space.opens:
        for c in coverings(a.space, u, max_members):
            checked += 1
            if not a.cat.is_epi(canonical_map(a, c)):
                return Verdict(False, (u, c), checked)
    return Verdict(True, None, checked)


def is_cosheaf(a: Precosheaf, max_members: int = 4) -> Verdict:
    """Every covering's H0 maps isomorphically onto the value; witness ``(U, covering)``."""
    checked = 0
    for u in a.space.opens:
        for c in coverings(a.space, u, max_members):
            checked += 1
            if not a.cat.is_iso(h0(a, c).to_target.rep):
                return Verdict(False, (u, c), checked)
    return Verdict(True, None, checked)


@dataclass(frozen=True)
class LocalIsoReport:
    ok: bool
    points: dict

    def __bool__(self):
        return self.ok


def is_local_isomorphism(phi: PcMor) -> LocalIsoReport:
    """Per-point test that the induced map of costalks is an iso."""
    cat = phi.source.cat
    verdicts = {}
    for x in phi.source.space.points:
        cs, ct = costalk(phi.source, x), costalk(phi.target, x)
        ux = phi.source.space.minimal_open(x)
        # both limits are realized at U_x, so the induced map is the component there
        assert cs.value is phi.source.values[ux] and ct.value is phi.target.values[ux]
        verdicts[x] = cat.is_iso(phi.component(ux))
    return LocalIsoReport(all(verdicts.values()), verdicts)


# -- morphism enumeration ----------------------------------------------------------


def _set_candidates(a, b, u, chosen, iso, space):
    src, tgt = a.obj(u), b.obj(u)
    forced = {}
    for v in space.hasse_children(u):
        ta, tb, phi = a.map(v, u), b.map(v, u), chosen[v]
        for x in a.obj(v):
            y = tb(phi(x))
            if forced.setdefault(ta(x), y) != y:
                return
    free = [x for x in src if x not in forced]
    if iso:
        if len(set(forced.values())) != len(forced) or len(src) != len(tgt):
            return
        unused = [y for y in tgt if y not in set(forced.values())]
        options = permutations(unused)
    else:
        options = product(tgt.elements, repeat=len(free))
    for imgs in options:
        assignment = dict(forced)
        assignment.update(zip(free, imgs))
        yield SetMap.from_dict(src, tgt, assignment)


def _ab_candidates(a, b, u, chosen, iso, space):
    cat = a.cat
    src, tgt = a.obj(u), b.obj(u)
    children = space.hasse_children(u)
    e = h = None
    if children:
        sub, _ = cat.coproduct([a.obj(v) for v in children])
        e = cat.copair(sub, [a.map(v, u) for v in children], src)
        h = cat.copair(sub, [cat.compose(b.map(v, u), chosen[v]) for v in children], tgt)
        if cat.is_epi(e):
            phi = cat.factor_through_epi(e, h)
            if phi is not None and (not iso or cat.is_iso(phi)):
                yield phi
            return
    pool = cat.isos(src, tgt) if iso else cat.hom(src, tgt)
    for phi in pool:
        if e is None or cat.equal(cat.compose(phi, e), h):
            yield phi


def _natural_families(a: Precosheaf, b: Precosheaf, iso: bool, budget: int) -> Iterator[dict]:
    if a.space is not b.space or a.base != b.base:
        raise ValueError("precosheaves on different spaces or bases")
    space = a.space
    opens = space.opens
    candidates = _set_candidates if a.base == "sets" else _ab_candidates
    steps = 0
    chosen: dict = {}

    def extend(k):
        nonlocal steps
        if k == len(opens):
            yield dict(chosen)
            return
        u = opens[k]
        for phi in candidates(a, b, u, chosen, iso, space):
            steps += 1
            if steps > budget:
                raise BudgetExceeded(f"more than {budget} enumeration steps")
            chosen[u] = phi
            yield from extend(k + 1)
        chosen.pop(u, None)

    if budget <= 0:
        raise BudgetExceeded("enumeration budget is zero")
    yield from extend(0)


def enumerate_morphisms(a: Precosheaf, b: Precosheaf, budget: int = 10**5) -> list[PcMor]:
    """All natural families ``a -> b``, built open by open in canonical order.

    At each open only the squares from its maximal proper sub-opens are
    imposed; the other squares follow by pasting.  ``budget`` caps the number
    of component choices tried.
    """
    return [PcMor.from_maps(a, b, fam, check=False) for fam in _natural_families(a, b, False, budget)]


def find_isomorphism(a: Precosheaf, b: Precosheaf, budget: int = 10**5) -> PcMor | None:
    for fam in _natural_families(a, b, True, budget):
        return PcMor.from_maps(a, b, fam, check=False)
    return None
