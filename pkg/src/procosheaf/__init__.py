"""Precosheaves of pro-sets and pro-abelian groups on finite spaces, and their cosheafification."""
from .abelian import AB, AbMap, FpAbGroup, cokernel_ab, hom_group
from .finsets import SETS, FinSet, SetMap, coequalizer_set
from .plus import check_adjunction, h0, h0_refinement_map, plus, sharp, smoothness_certificate
from .precosheaf import (
    BudgetExceeded,
    PcMor,
    Precosheaf,
    costalk,
    enumerate_morphisms,
    find_isomorphism,
    is_coseparated,
    is_cosheaf,
    is_local_isomorphism,
)
from .pro import (
    CofilteredIndex,
    ProMor,
    ProObj,
    cofiltered_limit,
    coequalizer_pro,
    coproduct,
    hom_pro,
    is_epi,
    is_iso,
    kappa_eval,
)
from .shape import (
    LocallyConstantSpec,
    cech_h0_dual,
    locally_constant,
    pro_h0_cosheaf,
    pro_pi0_cosheaf,
    verify_theorem5,
)
from .site import (
    Covering,
    FinSpace,
    RefinementMapping,
    enumerate_refinement_pairs,
    finest_covering,
    intersections,
    named_space,
    pi0,
    validate_space,
)
from .smith import smith_normal_form

__version__ = "0.1.0"
