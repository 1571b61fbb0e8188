"""Read package objects out into the plain data the oracles take."""
from procosheaf.finsets import FinSet


def plain_sets(a):
    """``(opens, inclusions, values, maps)`` of a set-valued precosheaf."""
    space = a.space
    opens = list(space.opens)
    incl = [(u, v) for u in opens for v in opens if u <= v]
    values = {u: list(a.obj(u).elements) for u in opens}
    maps = {(u, v): a.map(u, v).as_dict() for u, v in incl}
    return opens, incl, values, maps


def fs(*atoms):
    return FinSet(tuple(atoms))


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE: list[str] = []
