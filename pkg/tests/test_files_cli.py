import json

import pytest

from procosheaf.cli import main
from procosheaf.corpus import corpus
from procosheaf.files import (
    InputError,
    dumps,
    load_json,
    precosheaf_from_dict,
    precosheaf_to_dict,
    space_from_dict,
    space_to_dict,
)
from procosheaf.precosheaf import find_isomorphism
from procosheaf.site import NAMED_SPACES, named_space


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(dumps(doc) if not isinstance(doc, str) else doc)
    return str(path)


def space_file(tmp_path, name):
    return write(tmp_path, f"{name}.space.json", space_to_dict(named_space(name)))


def shorthand(tmp_path, space, kind, base="sets", atoms=("s",), group=None):
    doc = {"space": space, "base": base, "shorthand": kind}
    if base == "sets":
        doc["set"] = list(atoms)
    else:
        doc["group"] = group
    return write(tmp_path, f"{space}.{kind}.json", doc)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out else None), err


@pytest.mark.parametrize("name", NAMED_SPACES)
def test_space_round_trip(name):
    text = dumps(space_to_dict(named_space(name)))
    assert dumps(space_to_dict(space_from_dict(json.loads(text)))) == text


@pytest.mark.parametrize("label,a", list(corpus(per_space=3)), ids=lambda x: x if isinstance(x, str) else "")
def test_precosheaf_round_trip(label, a):
    text = dumps(precosheaf_to_dict(a))
    b = precosheaf_from_dict(json.loads(text), a.space)
    assert dumps(precosheaf_to_dict(b)) == text
    if a.base == "sets":
        assert find_isomorphism(a, b) is not None


def test_parse_errors_name_the_field(tmp_path):
    sp = named_space("sierpinski")
    doc = precosheaf_to_dict(next(a for _, a in corpus(1, spaces=("sierpinski",), bases=("sets",))))
    doc["values"][1]["open"] = ["nowhere"]
    with pytest.raises(InputError, match=r"precosheaf\.values\[1\]\.open: unknown points"):
        precosheaf_from_dict(doc, sp)
    with pytest.raises(InputError, match="missing field 'base'"):
        precosheaf_from_dict({"space": "sierpinski"}, sp)
    with pytest.raises(InputError, match="whole space"):
        space_from_dict({"name": "bad", "points": ["a", "b"], "opens": [[], ["a"]]})
    bad = write(tmp_path, "bad.json", '{"name": "x",\n "points": [}')
    with pytest.raises(InputError, match="line 2 column"):
        load_json(bad)


def test_functoriality_checked_on_load():
    sp = named_space("pseudocircle")
    doc = {"space": "pseudocircle", "base": "sets", "shorthand": "locally_constant", "set": ["s", "t"]}
    doc = precosheaf_to_dict(precosheaf_from_dict(doc, sp))
    edge = next(t for t in doc["transitions"] if t["from"] == ["a", "b"] and t["to"] == ["a", "b", "c"])
    edge["map"] = {"s": "t", "t": "s"}
    with pytest.raises(InputError, match="compose"):
        precosheaf_from_dict(doc, sp)


def test_check_command(tmp_path, capsys):
    code, rep, _ = run(capsys, "check", space_file(tmp_path, "pseudocircle"),
                       shorthand(tmp_path, "pseudocircle", "pro_pi0", atoms=("s", "t")))
    assert code == 0 and all(v["ok"] for v in rep["report"]["verdicts"].values())
    code, rep, _ = run(capsys, "check", space_file(tmp_path, "discrete2"),
                       shorthand(tmp_path, "discrete2", "locally_constant"))
    cosheaf = rep["report"]["verdicts"]["cosheaf"]
    assert code == 1 and not cosheaf["ok"]
    assert cosheaf["witness"] == {"open": "{p,q}", "covering": ["{p}", "{q}"]}
    assert not rep["report"]["verdicts"]["dual_sheaf"]["ok"]
    assert rep["report"]["verdicts"]["coseparated"]["ok"]


def test_check_rejects_unknown_point(tmp_path, capsys):
    doc = {"space": "sierpinski", "base": "sets",
           "values": [{"open": [], "set": []}, {"open": ["z"], "set": ["a"]}], "transitions": []}
    code, rep, err = run(capsys, "check", space_file(tmp_path, "sierpinski"), write(tmp_path, "p.json", doc))
    assert code == 2 and rep is None
    assert "precosheaf.values[1].open: unknown points ['z']" in err


def test_reports_are_deterministic(tmp_path, capsys):
    args = ("check", space_file(tmp_path, "discrete3"), shorthand(tmp_path, "discrete3", "locally_constant"))
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert dumps(first["report"]) == dumps(second["report"])
    assert first["inputs_sha256"] == second["inputs_sha256"]


def test_cosheafify_command(tmp_path, capsys):
    out = tmp_path / "sharp.json"
    sp = space_file(tmp_path, "pseudocircle")
    code, rep, _ = run(capsys, "cosheafify", sp, shorthand(tmp_path, "pseudocircle", "locally_constant",
                                                          atoms=("s", "t")), "--out", out)
    assert code == 0 and rep["report"]["counit_local_iso"]["ok"]
    emitted = json.loads(out.read_text())
    sizes = {tuple(v["open"]): len(v["set"]) for v in emitted["values"]}
    assert sizes[("a", "b", "c", "d")] == 2 and sizes[("a", "b")] == 4
    parsed = precosheaf_from_dict(emitted, space_from_dict(load_json(sp)))
    assert dumps(precosheaf_to_dict(parsed)) == out.read_text()

    code, rep, _ = run(capsys, "cosheafify", sp, shorthand(tmp_path, "pseudocircle", "pro_pi0"))
    assert code == 0 and set(rep["report"]["counit"].values()) == {"iso"}

    code, rep, _ = run(capsys, "cosheafify", space_file(tmp_path, "discrete2"),
                       shorthand(tmp_path, "discrete2", "locally_constant", base="abelian",
                                 group={"generators": 1, "relations": []}))
    assert rep["report"]["sharp_values"]["{p,q}"] == {"invariant_factors": [0, 0]}


@pytest.mark.parametrize(
    "space,kind,base,extra,iso",
    [
        ("discrete2", "locally_constant", "sets", {}, False),
        ("pseudocircle", "pro_pi0", "sets", {}, True),
        ("pseudocircle", "locally_constant", "abelian", {"group": {"generators": 1}}, False),
    ],
)
def test_smoothness_command(tmp_path, capsys, space, kind, base, extra, iso):
    doc = {"space": space, "base": base, "shorthand": kind, **extra}
    if base == "sets":
        doc["set"] = ["s"]
    code, rep, _ = run(capsys, "smoothness", space_file(tmp_path, space), write(tmp_path, "p.json", doc))
    assert code == 0
    assert rep["report"]["certificate"]["counit_is_iso"] is iso
    assert rep["report"]["counit_local_iso"]["ok"]


def test_costalk_command(tmp_path, capsys):
    sp = space_file(tmp_path, "pseudocircle")
    pc = shorthand(tmp_path, "pseudocircle", "pro_pi0", atoms=("s", "t"))
    code, rep, _ = run(capsys, "costalk", sp, pc, "--point", "c")
    assert code == 0 and rep["report"]["minimal_open"] == "{a,b,c}"
    assert rep["report"]["value"] == {"size": 2}
    code, _, err = run(capsys, "costalk", sp, pc, "--point", "z")
    assert code == 2 and "unknown point" in err


def test_verify_theorem5_command(tmp_path, capsys):
    sp = space_file(tmp_path, "pseudocircle")
    code, rep, _ = run(capsys, "verify-theorem5", sp, "--set", "a,b,c")
    assert code == 0 and rep["report"]["ok"]
    code, rep, _ = run(capsys, "verify-theorem5", sp, "--group", "2,3")
    assert code == 0 and rep["report"]["values"]["{a,b}"]["sharp"] == {"invariant_factors": [6, 6]}
    code, _, err = run(capsys, "verify-theorem5", sp)
    assert code == 2 and "exactly one" in err
    code, _, err = run(capsys, "verify-theorem5", sp, "--set", "a,b", "--steps", "0")
    assert code == 2 and "budget" in err


def test_examples_command(tmp_path, capsys):
    code, rep, _ = run(capsys, "examples", "pseudocircle", "--out", tmp_path)
    assert code == 0
    space = load_json(tmp_path / "pseudocircle.space.json")
    assert space["points"] == ["a", "b", "c", "d"] and len(space["opens"]) == 7
    code, rep, _ = run(capsys, "check", tmp_path / "pseudocircle.space.json", tmp_path / "pseudocircle.pcs.json")
    assert code in (0, 1) and rep["report"]["base"] == "sets"
    code, _, _ = run(capsys, "examples", "point", "--out", tmp_path)
    assert load_json(tmp_path / "point.space.json")["points"] == ["pt"]
    code, _, err = run(capsys, "examples", "unknown", "--out", tmp_path)
    assert code == 2 and "sierpinski" in err and "pseudocircle" in err


def test_report_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    run(capsys, "verify-theorem5", space_file(tmp_path, "point"), "--set", "x", "--report", path)
    assert json.loads(path.read_text())["command"] == "verify-theorem5"
