"""JSON encodings of spaces and precosheaves.

Documents are written with sorted keys and a fixed element order, so
emitting a parsed canonical file reproduces it byte for byte.
"""
from __future__ import annotations

import json
from pathlib import Path

from .abelian import AbMap, FpAbGroup
from .finsets import FinSet, SetMap
from .precosheaf import Precosheaf
from .shape import LocallyConstantSpec, locally_constant, pro_h0_cosheaf, pro_pi0_cosheaf
from .site import FinSpace, SpaceError, validate_space


class InputError(ValueError):
    """A file failed to parse; the message names the offending field."""


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def load_json(path: str | Path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _require(doc, key, kind, where):
    if not isinstance(doc, dict) or key not in doc:
        raise InputError(f"{where}: missing field {key!r}")
    value = doc[key]
    if not isinstance(value, kind):
        raise InputError(f"{where}.{key}: expected {getattr(kind, '__name__', kind)}")
    return value


# -- spaces ----------------------------------------------------------------------


def space_to_dict(space: FinSpace) -> dict:
    return {
        "name": space.name,
        "points": list(space.points),
        "opens": [space.sort_points(u) for u in space.opens],
    }


def space_from_dict(doc) -> FinSpace:
    name = _require(doc, "name", str, "space")
    points = _require(doc, "points", list, "space")
    opens = _require(doc, "opens", list, "space")
    for k, p in enumerate(points):
        if not isinstance(p, str):
            raise InputError(f"space.points[{k}]: point labels must be strings")
    for k, u in enumerate(opens):
        if not isinstance(u, list) or not all(isinstance(p, str) for p in u):
            raise InputError(f"space.opens[{k}]: expected a list of point labels")
        unknown = [p for p in u if p not in points]
        if unknown:
            raise InputError(f"space.opens[{k}]: unknown points {unknown}")
    try:
        return validate_space(points, opens, name)
    except SpaceError as exc:
        raise InputError(f"space: {exc}") from None


# -- precosheaves ------------------------------------------------------------------


def atom_label(x) -> str:
    """Printable label for an atom; nested tuples become ``(a,b)``."""
    if isinstance(x, str):
        return x
    if isinstance(x, tuple):
        return "(" + ",".join(atom_label(y) for y in x) + ")"
    return str(x)


def _labels(s: FinSet) -> list[str]:
    out = [atom_label(x) for x in s]
    if len(set(out)) != len(out):
        raise ValueError(f"atoms of {s!r} have colliding labels")
    return out


def precosheaf_to_dict(a: Precosheaf) -> dict:
    space = a.space
    values, transitions = [], []
    for u in space.opens:
        obj = a.obj(u)
        entry = {"open": space.sort_points(u)}
        if a.base == "sets":
            entry["set"] = _labels(obj)
        else:
            entry["generators"] = obj.ngens
            entry["relations"] = [list(r) for r in obj.relations]
        values.append(entry)
    for v, u in sorted(space.hasse_edges(), key=lambda e: (space.open_key(e[0]), space.open_key(e[1]))):
        entry = {"from": space.sort_points(v), "to": space.sort_points(u)}
        f = a.map(v, u)
        if a.base == "sets":
            entry["map"] = dict(zip(_labels(f.source), (atom_label(y) for y in f.images)))
        else:
            entry["matrix"] = [list(r) for r in f.matrix]
        transitions.append(entry)
    return {"space": space.name, "base": a.base, "values": values, "transitions": transitions}


def _open(doc, space: FinSpace, where: str) -> frozenset:
    if not isinstance(doc, list) or not all(isinstance(p, str) for p in doc):
        raise InputError(f"{where}: expected a list of point labels")
    unknown = [p for p in doc if p not in space.position]
    if unknown:
        raise InputError(f"{where}: unknown points {unknown}")
    u = frozenset(doc)
    if not space.is_open(u):
        raise InputError(f"{where}: {sorted(u)} is not open in {space.name}")
    return u


def _group(doc, where: str) -> FpAbGroup:
    n = _require(doc, "generators", int, where)
    rels = doc.get("relations", [])
    if not isinstance(rels, list) or not all(
        isinstance(r, list) and len(r) == n and all(isinstance(x, int) for x in r) for r in rels
    ):
        raise InputError(f"{where}.relations: expected rows of {n} integers")
    if n < 0:
        raise InputError(f"{where}.generators: must be non-negative")
    return FpAbGroup(n, tuple(tuple(r) for r in rels))


def _set(doc, where: str) -> FinSet:
    elems = doc
    if not isinstance(elems, list) or not all(isinstance(x, str) for x in elems):
        raise InputError(f"{where}: expected a list of string atoms")
    if len(set(elems)) != len(elems):
        raise InputError(f"{where}: duplicate atoms")
    return FinSet(tuple(elems))


SHORTHANDS = ("locally_constant", "pro_pi0", "pro_h0")


def precosheaf_from_dict(doc, space: FinSpace) -> Precosheaf:
    name = _require(doc, "space", str, "precosheaf")
    if name != space.name:
        raise InputError(f"precosheaf.space: refers to {name!r} but the space file is {space.name!r}")
    base = _require(doc, "base", str, "precosheaf")
    if base not in ("sets", "abelian"):
        raise InputError(f"precosheaf.base: expected 'sets' or 'abelian', got {base!r}")
    if "shorthand" in doc:
        kind = doc["shorthand"]
        if kind not in SHORTHANDS:
            raise InputError(f"precosheaf.shorthand: expected one of {list(SHORTHANDS)}")
        datum = (
            _set(doc.get("set"), "precosheaf.set") if base == "sets"
            else _group(_require(doc, "group", dict, "precosheaf"), "precosheaf.group")
        )
        if kind == "locally_constant":
            return locally_constant(space, LocallyConstantSpec(base, datum))
        if (kind == "pro_pi0") != (base == "sets"):
            raise InputError(f"precosheaf.shorthand: {kind} does not match base {base!r}")
        return pro_pi0_cosheaf(space, datum) if base == "sets" else pro_h0_cosheaf(space, datum)

    values = _require(doc, "values", list, "precosheaf")
    transitions = _require(doc, "transitions", list, "precosheaf")
    objects = {}
    for k, entry in enumerate(values):
        where = f"precosheaf.values[{k}]"
        u = _open(_require(entry, "open", list, where), space, f"{where}.open")
        if u in objects:
            raise InputError(f"{where}.open: value given twice")
        objects[u] = _set(entry.get("set"), f"{where}.set") if base == "sets" else _group(entry, where)
    missing = [space.label(u) for u in space.opens if u not in objects]
    if missing:
        raise InputError(f"precosheaf.values: no value for opens {missing}")
    maps = {}
    for k, entry in enumerate(transitions):
        where = f"precosheaf.transitions[{k}]"
        v = _open(_require(entry, "from", list, where), space, f"{where}.from")
        u = _open(_require(entry, "to", list, where), space, f"{where}.to")
        if not v <= u:
            raise InputError(f"{where}: {space.label(v)} is not inside {space.label(u)}")
        try:
            if base == "sets":
                table = _require(entry, "map", dict, where)
                maps[(v, u)] = SetMap.from_dict(objects[v], objects[u], table)
            else:
                matrix = _require(entry, "matrix", list, where)
                maps[(v, u)] = AbMap(objects[v], objects[u], tuple(tuple(r) for r in matrix))
        except (ValueError, TypeError) as exc:
            raise InputError(f"{where}: {exc}") from None
    try:
        return Precosheaf.from_objects(space, base, objects, maps)
    except ValueError as exc:
        raise InputError(f"precosheaf: {exc}") from None


def write_text(path: str | Path, text: str) -> None:
    Path(path).write_text(text)
