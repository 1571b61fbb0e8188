"""The plus-construction, cosheafification and what can be certified about it."""
from __future__ import annotations

from dataclasses import dataclass

from .precosheaf import (
    H0Result,
    LocalIsoReport,
    PcMor,
    Precosheaf,
    enumerate_morphisms,
    h0,
    is_cosheaf,
    is_local_isomorphism,
)
from .pro import ProMor
from .site import Covering, RefinementMapping, finest_covering

__all__ = [
    "H0Result", "h0", "h0_map", "h0_refinement_map", "plus", "sharp",
    "AdjunctionReport", "check_adjunction", "SmoothnessCertificate",
    "SmoothnessFailure", "smoothness_certificate",
]


def h0_map(a: Precosheaf, src: H0Result, dst: H0Result, epsilon) -> object:
    """Base map ``H0(src) -> H0(dst)`` induced by ``A(V_j) -> A(U_epsilon(j))``.

    The coverings may be of different opens as long as each ``V_j`` lies in
    ``U_epsilon(j)``; this also gives the transitions of the plus-construction.
    """
    cat = a.cat
    vs, us = src.covering.members, dst.covering.members
    maps = []
    for j, i in enumerate(epsilon):
        if not vs[j] <= us[i]:
            raise ValueError(f"member {j} is not inside member {i}")
        maps.append(cat.compose(dst.injections[i], a.map(vs[j], us[i])))
    piecewise = cat.copair(src.pieces, maps, dst.pieces)
    return cat.compose(dst.proj, cat.compose(piecewise, src.section))


def h0_refinement_map(r: RefinementMapping, a: Precosheaf) -> ProMor:
    src, dst = h0(a, r.source), h0(a, r.target)
    return ProMor(src.value, dst.value, h0_map(a, src, dst, r.epsilon))


def plus(a: Precosheaf) -> tuple[Precosheaf, PcMor]:
    """``(A+, alpha)`` with ``A+(U) = H0(finest covering of U, A)`` and ``alpha: A+ -> A``.

    The finest covering refines every covering, so it computes the limit over
    all of them.  For ``U <= V`` each member ``U_x`` of the finest covering
    of ``U`` is also a member of that of ``V``, which gives the transition.
    """
    space = a.space
    res = {u: h0(a, finest_covering(space, u)) for u in space.opens}
    values = {u: r.value for u, r in res.items()}
    transitions = {}
    for u in space.opens:
        for v in space.opens:
            if u < v:
                targets = res[v].covering.members
                eps = [targets.index(m) for m in res[u].covering.members]
                transitions[(u, v)] = ProMor(values[u], values[v], h0_map(a, res[u], res[v], eps))
    a_plus = Precosheaf(space, a.base, values, transitions, check=False)
    alpha = PcMor(a_plus, a, {u: r.to_target for u, r in res.items()}, check=False)
    return a_plus, alpha


def sharp(a: Precosheaf) -> tuple[Precosheaf, PcMor]:
    """``(A#, counit)`` with ``A# = (A+)+`` and ``counit: A# -> A+ -> A``."""
    a_plus, alpha = plus(a)
    a_sharp, alpha_plus = plus(a_plus)
    return a_sharp, alpha_plus.then(alpha)


@dataclass(frozen=True)
class AdjunctionReport:
    ok: bool
    hom_to_sharp: int
    hom_to_original: int

    def __bool__(self):
        return self.ok


def check_adjunction(b: Precosheaf, a: Precosheaf, budget: int = 10**5) -> AdjunctionReport:
    """Whether composing with the counit is a bijection ``Hom(B, A#) -> Hom(B, A)``."""
    a_sharp, counit = sharp(a)
    to_sharp = enumerate_morphisms(b, a_sharp, budget)
    direct = enumerate_morphisms(b, a, budget)
    images = [phi.then(counit) for phi in to_sharp]
    ok = len(set(images)) == len(images) and set(images) == set(direct)
    return AdjunctionReport(ok, len(to_sharp), len(direct))


class SmoothnessFailure(AssertionError):
    """Cosheafification produced something that is not a cosheaf, or a non-local counit."""


@dataclass(frozen=True, eq=False)
class SmoothnessCertificate:
    """The zig-zag ``A <- A# -> A#`` (counit, identity) with its checks.

    ``counit_is_iso`` records whether ``A`` was already a cosheaf up to iso.
    """

    precosheaf: Precosheaf
    cosheaf: Precosheaf
    counit: PcMor
    local_iso_report: LocalIsoReport
    counit_is_iso: bool

    @property
    def zigzag(self) -> tuple[PcMor, PcMor]:
        return self.counit, PcMor.identity(self.cosheaf)


def smoothness_certificate(a: Precosheaf, max_members: int = 4) -> SmoothnessCertificate:
    a_sharp, counit = sharp(a)
    verdict = is_cosheaf(a_sharp, max_members)
    if not verdict:
        u, c = verdict.witness
        raise SmoothnessFailure(
            f"A# fails the cosheaf axiom on {a.space.label(u)} for covering "
            f"{[a.space.label(m) for m in c.members]}"
        )
    report = is_local_isomorphism(counit)
    if not report:
        bad = [x for x, ok in report.points.items() if not ok]
        raise SmoothnessFailure(f"counit is not an iso on costalks at {bad}")
    return SmoothnessCertificate(a, a_sharp, counit, report, counit.is_iso())


def covering_label(space, c: Covering) -> list[str]:
    return [space.label(m) for m in c.members]
