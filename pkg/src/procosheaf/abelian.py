"""Finitely presented abelian groups and their homomorphisms.

A group ``FpAbGroup(n, R)`` is ``Z^n`` modulo the row space of ``R``.
Elements are integer vectors of length ``n``; a homomorphism stores the
images of the source generators as the *columns* of its matrix, so the
matrix has shape ``target.ngens x source.ngens``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, Sequence

from .finsets import FinSet
from .smith import SNF, determinant, matvec, snf


def _prime_factors(n: int) -> list[int]:
    n, out, p = abs(n), [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class FpAbGroup:
    ngens: int
    relations: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        rels = tuple(tuple(int(x) for x in row) for row in self.relations)
        if self.ngens < 0:
            raise ValueError("generator count must be non-negative")
        for row in rels:
            if len(row) != self.ngens:
                raise ValueError(f"relation {row} does not have {self.ngens} entries")
        object.__setattr__(self, "relations", rels)

    @classmethod
    def free(cls, n: int) -> "FpAbGroup":
        return cls(n)

    @classmethod
    def cyclic(cls, n: int) -> "FpAbGroup":
        """``Z/n``; ``cyclic(0)`` is ``Z``."""
        return cls(1, ((n,),) if n else ())

    @classmethod
    def from_factors(cls, factors: Sequence[int]) -> "FpAbGroup":
        n = len(factors)
        rels = tuple(
            tuple(d if j == i else 0 for j in range(n)) for i, d in enumerate(factors) if d
        )
        return cls(n, rels)

    @cached_property
    def smith(self) -> SNF:
        return snf([list(r) for r in self.relations], cols=self.ngens)

    @cached_property
    def _moduli(self) -> list[int]:
        diag = self.smith.diagonal
        return [diag[k] if k < len(diag) else 0 for k in range(self.ngens)]

    @cached_property
    def _kept(self) -> list[int]:
        return [k for k, d in enumerate(self._moduli) if d != 1]

    @cached_property
    def invariant_factors(self) -> tuple[int, ...]:
        """``d_1 | d_2 | ...`` with units removed; free summands appear as trailing 0s."""
        return tuple(self._moduli[k] for k in self._kept)

    @property
    def rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d == 0)

    def is_finite(self) -> bool:
        return self.rank == 0

    def order(self) -> int | float:
        if not self.is_finite():
            return float("inf")
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def canonical(self, v: Sequence[int]) -> tuple[int, ...]:
        """Coordinates of ``v`` in the invariant-factor basis; equal iff equal in the group."""
        V = self.smith.V
        out = []
        for k in self._kept:
            y = sum(V[i][k] * v[i] for i in range(self.ngens))
            d = self._moduli[k]
            out.append(y % d if d else y)
        return tuple(out)

    def is_zero(self, v: Sequence[int]) -> bool:
        return not any(self.canonical(v))

    def from_canonical(self, coords: Sequence[int]) -> list[int]:
        Vi = self.smith.V_inv
        v = [0] * self.ngens
        for c, k in zip(coords, self._kept):
            if c:
                for i in range(self.ngens):
                    v[i] += c * Vi[k][i]
        return v

    def elements(self) -> list[list[int]]:
        if not self.is_finite():
            raise ValueError(f"{self} is infinite")
        return [self.from_canonical(c) for c in product(*(range(d) for d in self.invariant_factors))]

    def torsion_elements(self, n: int) -> list[list[int]]:
        """Elements ``z`` with ``n * z == 0``; ``n == 0`` gives every element."""
        if n == 0:
            return self.elements()
        return [z for z in self.elements() if self.is_zero([n * x for x in z])]

    def __str__(self):
        if not self.invariant_factors:
            return "0"
        return " + ".join("Z" if d == 0 else f"Z/{d}" for d in self.invariant_factors)


@dataclass(frozen=True, eq=False)
class AbMap:
    source: FpAbGroup
    target: FpAbGroup
    matrix: tuple[tuple[int, ...], ...]
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in row) for row in self.matrix)
        if self.target.ngens == 0:
            m = ()
        object.__setattr__(self, "matrix", m)
        if not self.check:
            return
        if len(m) != self.target.ngens or any(len(row) != self.source.ngens for row in m):
            raise ValueError(
                f"matrix must be {self.target.ngens} x {self.source.ngens} (target x source)"
            )
        for rel in self.source.relations:
            if not self.target.is_zero(self.apply(rel)):
                raise ValueError(f"relation {rel} is not sent into the target relations")

    @classmethod
    def from_columns(cls, source, target, columns, check=True) -> "AbMap":
        cols = [list(c) for c in columns]
        rows = [[c[i] for c in cols] for i in range(target.ngens)]
        return cls(source, target, tuple(map(tuple, rows)), check)

    @classmethod
    def identity(cls, g: FpAbGroup) -> "AbMap":
        n = g.ngens
        return cls(g, g, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), False)

    @classmethod
    def zero(cls, source: FpAbGroup, target: FpAbGroup) -> "AbMap":
        return cls(source, target, tuple((0,) * source.ngens for _ in range(target.ngens)), False)

    def apply(self, v: Sequence[int]) -> list[int]:
        return matvec([list(r) for r in self.matrix], list(v)) if self.matrix else []

    def column(self, i: int) -> list[int]:
        return [row[i] for row in self.matrix]

    @cached_property
    def key(self) -> tuple:
        return tuple(self.target.canonical(self.column(i)) for i in range(self.source.ngens))

    def __eq__(self, other):
        if not isinstance(other, AbMap):
            return NotImplemented
        return (
            self.source == other.source and self.target == other.target and self.key == other.key
        )

    def __hash__(self):
        return hash((self.source, self.target, self.key))

    def then(self, other: "AbMap") -> "AbMap":
        """``other o self``."""
        if other.source != self.target:
            raise ValueError("maps are not composable")
        cols = [other.apply(self.column(i)) for i in range(self.source.ngens)]
        return AbMap.from_columns(self.source, other.target, cols, check=False)

    def __add__(self, other: "AbMap") -> "AbMap":
        rows = [[a + b for a, b in zip(r, s)] for r, s in zip(self.matrix, other.matrix)]
        return AbMap(self.source, self.target, tuple(map(tuple, rows)), False)

    def __neg__(self) -> "AbMap":
        return AbMap(self.source, self.target, tuple(tuple(-x for x in r) for r in self.matrix), False)

    def __sub__(self, other: "AbMap") -> "AbMap":
        return self + (-other)

    def is_zero(self) -> bool:
        return not any(any(c) for c in self.key)


def cokernel_ab(h: AbMap) -> tuple[FpAbGroup, AbMap]:
    """Target relations stacked with the images of the source generators."""
    t = h.target
    rels = t.relations + tuple(tuple(h.column(i)) for i in range(h.source.ngens))
    c = FpAbGroup(t.ngens, rels)
    return c, AbMap(t, c, AbMap.identity(t).matrix, False)


def simplify(g: FpAbGroup) -> tuple[FpAbGroup, AbMap, AbMap]:
    """``(S, to_s, from_s)`` with ``S`` presented diagonally by its invariant factors."""
    s = FpAbGroup.from_factors(g.invariant_factors)
    V, Vi = g.smith.V, g.smith.V_inv
    to_rows = [[V[i][k] for i in range(g.ngens)] for k in g._kept]
    from_cols = [Vi[k] for k in g._kept]
    to_s = AbMap(g, s, tuple(map(tuple, to_rows)), False)
    from_s = AbMap.from_columns(s, g, from_cols, check=False)
    return s, to_s, from_s


def direct_sum(parts: Sequence[FpAbGroup]) -> tuple[FpAbGroup, list[AbMap]]:
    n = sum(p.ngens for p in parts)
    rels, injections, offset = [], [], 0
    offsets = []
    for p in parts:
        offsets.append(offset)
        for r in p.relations:
            rels.append((0,) * offset + r + (0,) * (n - offset - p.ngens))
        offset += p.ngens
    total = FpAbGroup(n, tuple(rels))
    for p, off in zip(parts, offsets):
        cols = [[int(i == off + j) for i in range(n)] for j in range(p.ngens)]
        injections.append(AbMap.from_columns(p, total, cols, check=False))
    return total, injections


def hom_group(g: FpAbGroup, z: FpAbGroup) -> FinSet:
    """All homomorphisms ``g -> z`` for finite ``z``; the atoms are :class:`AbMap`.

    The group structure is pointwise addition of the returned maps.
    Images are chosen on the invariant-factor basis of ``g`` (a basis element
    with modulus ``d`` may go to any ``d``-torsion element of ``z``) and then
    pulled back to the original generators.
    """
    if not z.is_finite():
        raise ValueError(f"hom_group needs a finite test object, got {z}")
    V = g.smith.V
    choices = [z.torsion_elements(d) for d in g._moduli]
    out = []
    for ws in product(*choices):
        cols = []
        for i in range(g.ngens):
            col = [0] * z.ngens
            for k, w in enumerate(ws):
                c = V[i][k]
                if c:
                    col = [a + c * b for a, b in zip(col, w)]
            cols.append(col)
        out.append(AbMap.from_columns(g, z, cols, check=False))
    return FinSet(tuple(dict.fromkeys(out)))


def preimages(e: AbMap, targets: Iterable[Sequence[int]]) -> list[list[int] | None]:
    """For each target vector ``y`` some ``x`` with ``e(x) == y`` in the target group."""
    g = e.target
    a = [list(row) + [r[i] for r in g.relations] for i, row in enumerate(e.matrix)]
    ncols = e.source.ngens + len(g.relations)
    res = snf(a, cols=ncols)
    out = []
    for y in targets:
        yy = matvec(res.U, list(y)) if a else []
        w = [0] * ncols
        ok = True
        for k, yk in enumerate(yy):
            d = res.D[k][k] if k < ncols else 0
            if (d == 0 and yk) or (d and yk % d):
                ok = False
                break
            if d:
                w[k] = yk // d
        out.append(matvec(res.V, w)[: e.source.ngens] if ok else None)
    return out


class AbCategory:
    """Finitely presented abelian groups as a base category (see :class:`SetCategory`)."""

    name = "abelian"

    def is_object(self, x) -> bool:
        return isinstance(x, FpAbGroup)

    def identity(self, x: FpAbGroup) -> AbMap:
        return AbMap.identity(x)

    def compose(self, g: AbMap, f: AbMap) -> AbMap:
        return f.then(g)

    def initial(self) -> FpAbGroup:
        return FpAbGroup(0)

    def is_initial(self, x: FpAbGroup) -> bool:
        return x.is_trivial()

    def is_finite(self, x: FpAbGroup) -> bool:
        return x.is_finite()

    def coproduct(self, parts):
        return direct_sum(parts)

    def copair(self, total: FpAbGroup, maps: Sequence[AbMap], target: FpAbGroup) -> AbMap:
        rows = [[] for _ in range(target.ngens)]
        for m in maps:
            for i in range(target.ngens):
                rows[i].extend(m.matrix[i])
        return AbMap(total, target, tuple(map(tuple, rows)), False)

    def coequalizer(self, f: AbMap, g: AbMap):
        """``(Q, proj, section)``; the coequalizer of an additive pair is ``coker(f - g)``."""
        if f.source != g.source or f.target != g.target:
            raise ValueError("coequalizer needs a parallel pair")
        c, proj = cokernel_ab(f - g)
        q, to_q, from_q = simplify(c)
        proj = AbMap(f.target, q, to_q.matrix, False)
        section = AbMap(q, f.target, from_q.matrix, False)
        return q, proj, section

    def equal(self, f: AbMap, g: AbMap) -> bool:
        return f == g

    def is_epi(self, f: AbMap) -> bool:
        return cokernel_ab(f)[0].is_trivial()

    def is_iso(self, f: AbMap) -> bool:
        # f.g. abelian groups are Hopfian: a surjection between isomorphic ones is injective
        return (
            f.source.invariant_factors == f.target.invariant_factors and self.is_epi(f)
        )

    def hom(self, x: FpAbGroup, z: FpAbGroup) -> list[AbMap]:
        return list(hom_group(x, z).elements)

    def hom_size(self, x: FpAbGroup, z: FpAbGroup) -> int | float:
        if not z.is_finite():
            return float("inf")
        n = 1
        for d in x._moduli:
            n *= len(z.torsion_elements(d))
        return n

    def isos(self, x: FpAbGroup, y: FpAbGroup) -> Iterable[AbMap]:
        if x.invariant_factors != y.invariant_factors:
            return
        sx, to_x, _ = simplify(x)
        sy, _, from_y = simplify(y)
        factors = sx.invariant_factors
        t = sum(1 for d in factors if d)
        r = len(factors) - t
        if r > 1:
            raise ValueError("isomorphism search over free rank >= 2 is unsupported")
        tors = FpAbGroup.from_factors(factors[:t])
        free_signs = [1, -1] if r else [None]
        free_images = tors.elements() if r else [None]
        for a in hom_group(tors, tors):
            if not self.is_iso(a):
                continue
            for sign in free_signs:
                for b in free_images:
                    cols = [a.column(i) + [0] * r for i in range(t)]
                    if r:
                        cols.append(list(b) + [sign])
                    core = AbMap.from_columns(sx, sy, cols, check=False)
                    yield to_x.then(core).then(from_y)

    def factor_through_epi(self, e: AbMap, h: AbMap) -> AbMap | None:
        g = e.target
        units = [[int(i == k) for i in range(g.ngens)] for k in range(g.ngens)]
        lifts = preimages(e, units)
        if any(p is None for p in lifts):
            return None
        cols = [h.apply(p) for p in lifts]
        try:
            phi = AbMap.from_columns(g, h.target, cols)
        except ValueError:
            return None
        return phi if e.then(phi) == h else None

    def size(self, x: FpAbGroup):
        return x.order()

    def describe(self, x: FpAbGroup) -> dict:
        return {"invariant_factors": list(x.invariant_factors)}

    def epi_probes(self, f: AbMap) -> list[FpAbGroup]:
        """Finite cyclic probes at which precomposition by ``f`` detects non-epis.

        ``Z/2, Z/3, Z/5``, one ``Z/d`` per nonzero invariant factor of the
        target, and ``Z/p`` for each prime dividing the first nonzero maximal
        minor of ``f`` projected to the free part of the target.  Every prime
        dividing the order of a finite nonzero cokernel is among these.
        """
        y = f.target
        orders = {2, 3, 5} | {d for d in y.invariant_factors if d}
        r = y.rank
        if r:
            _, to_s, _ = simplify(y)
            composite = f.then(to_s)
            free_rows = [list(row) for row in composite.matrix[len(composite.matrix) - r:]]
            for cols in combinations(range(f.source.ngens), r):
                m = determinant([[row[c] for c in cols] for row in free_rows])
                if m:
                    orders |= set(_prime_factors(m))
                    break
        return [FpAbGroup.cyclic(n) for n in sorted(orders)]


AB = AbCategory()
