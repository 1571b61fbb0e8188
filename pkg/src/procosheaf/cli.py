"""Command-line entry point: ``procosheaf <command> ...``.

Every command prints a JSON report.  The ``report`` body depends only on
the inputs; timing lives beside it.  Exit status is 0 when every verdict
holds, 1 when a mathematical verdict fails and 2 on bad input.
"""
from __future__ import annotations

import argparse
import hashlib
import random
import sys
import time
from pathlib import Path

from .abelian import FpAbGroup
from .corpus import random_set_precosheaf
from .duality import dual_coseparated, dual_cosheaf
from .files import (
    InputError,
    dumps,
    load_json,
    precosheaf_from_dict,
    precosheaf_to_dict,
    space_from_dict,
    space_to_dict,
)
from .finsets import FinSet
from .plus import SmoothnessFailure, sharp, smoothness_certificate
from .precosheaf import BudgetExceeded, Verdict, costalk, is_coseparated, is_cosheaf, is_local_isomorphism
from .pro import ab_probes, set_probes
from .shape import LocallyConstantSpec, verify_theorem5
from .site import NAMED_SPACES, named_space

DEFAULT_MEMBERS = 4
DEFAULT_STEPS = 10**5


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _digest(paths) -> str:
    h = hashlib.sha256()
    for p in paths:
        h.update(Path(p).read_bytes())
    return h.hexdigest()


def _witness(space, v: Verdict):
    if v.ok:
        return None
    *probe, u, c = v.witness
    out = {"open": space.label(u), "covering": [space.label(m) for m in c.members]}
    if probe:
        z = probe[0]
        out["probe"] = str(z) if isinstance(z, FpAbGroup) else len(z)
    return out


def _verdict(space, v: Verdict) -> dict:
    return {"ok": v.ok, "witness": _witness(space, v)}


def _load(args):
    space = space_from_dict(load_json(args.space))
    pcs = precosheaf_from_dict(load_json(args.precosheaf), space)
    return space, pcs


def _probes(args, base):
    if base == "sets":
        return set_probes(args.probe_sizes)
    return ab_probes(args.ab_probes)


def cmd_check(args):
    space, a = _load(args)
    members = args.budget
    probes = _probes(args, a.base)
    cosep = is_coseparated(a, members)
    cosh = is_cosheaf(a, members)
    d_cosep = dual_coseparated(a, probes, members)
    d_cosh = dual_cosheaf(a, probes, members)
    body = {
        "base": a.base,
        "values": a.describe(),
        "verdicts": {
            "functorial": {"ok": True, "witness": None},
            "coseparated": _verdict(space, cosep),
            "cosheaf": _verdict(space, cosh),
            "dual_separated": _verdict(space, d_cosep),
            "dual_sheaf": _verdict(space, d_cosh),
        },
    }
    return body, all(v["ok"] for v in body["verdicts"].values())


def _counit_body(space, a_sharp, counit) -> dict:
    local = is_local_isomorphism(counit)
    return {
        "sharp_values": a_sharp.describe(),
        "counit": {
            space.label(u): "iso" if a_sharp.cat.is_iso(counit.component(u)) else "not iso"
            for u in space.opens
        },
        "counit_local_iso": {"ok": local.ok, "points": local.points},
    }


def cmd_cosheafify(args):
    space, a = _load(args)
    a_sharp, counit = sharp(a)
    body = _counit_body(space, a_sharp, counit)
    cosh = is_cosheaf(a_sharp, args.budget)
    body["sharp_is_cosheaf"] = _verdict(space, cosh)
    if args.out:
        Path(args.out).write_text(dumps(precosheaf_to_dict(a_sharp)))
        body["written"] = Path(args.out).name
    return body, cosh.ok and body["counit_local_iso"]["ok"]


def cmd_costalk(args):
    space, a = _load(args)
    if args.point not in space.position:
        raise InputError(f"--point: unknown point {args.point!r}; points are {list(space.points)}")
    c = costalk(a, args.point)
    body = {
        "point": args.point,
        "minimal_open": space.label(space.minimal_open(args.point)),
        "neighbourhoods": [space.label(u) for u in c.projections],
        "value": a.cat.describe(c.value.normal),
    }
    return body, True


def cmd_smoothness(args):
    space, a = _load(args)
    try:
        cert = smoothness_certificate(a, args.budget)
    except SmoothnessFailure as exc:
        return {"certificate": None, "failure": str(exc)}, False
    body = _counit_body(space, cert.cosheaf, cert.counit)
    body["certificate"] = {
        "zigzag": ["A <- A# (counit)", "A# -> A# (identity)"],
        "sharp_is_cosheaf": True,
        "counit_is_iso": cert.counit_is_iso,
    }
    return body, True


def cmd_verify_theorem5(args):
    space = space_from_dict(load_json(args.space))
    if (args.set is None) == (args.group is None):
        raise InputError("give exactly one of --set or --group")
    if args.set is not None:
        atoms = [x for x in args.set.split(",") if x]
        if len(set(atoms)) != len(atoms):
            raise InputError("--set: duplicate atoms")
        spec = LocallyConstantSpec("sets", FinSet(tuple(atoms)))
    else:
        spec = LocallyConstantSpec("abelian", FpAbGroup.from_factors(args.group))
    report = verify_theorem5(space, spec, args.steps)
    return report.to_dict(), report.ok


def cmd_examples(args):
    if args.name not in NAMED_SPACES:
        raise InputError(f"unknown example {args.name!r}; valid names: {', '.join(NAMED_SPACES)}")
    space = named_space(args.name)
    a = random_set_precosheaf(space, random.Random(f"0/{args.name}/sets/0"))
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    space_path = out / f"{args.name}.space.json"
    pcs_path = out / f"{args.name}.pcs.json"
    space_path.write_text(dumps(space_to_dict(space)))
    pcs_path.write_text(dumps(precosheaf_to_dict(a)))
    return {"name": args.name, "written": [space_path.name, pcs_path.name]}, True


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="procosheaf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, precosheaf=True):
        p.add_argument("space", help="space file (JSON)")
        if precosheaf:
            p.add_argument("precosheaf", help="precosheaf file (JSON)")
        p.add_argument("--budget", type=int, default=DEFAULT_MEMBERS,
                       help="largest covering size enumerated besides the finest covering")
        p.add_argument("--steps", type=int, default=DEFAULT_STEPS,
                       help="morphism enumeration step budget")
        p.add_argument("--probe-sizes", type=_int_list, default=[1, 2, 3],
                       help="sizes of the finite set probes")
        p.add_argument("--ab-probes", type=_int_list, default=[2, 3, 4],
                       help="orders of the cyclic group probes")
        p.add_argument("--report", help="also write the report to this path")

    p = sub.add_parser("check", help="functoriality, coseparation and cosheaf axioms")
    common(p)
    p.set_defaults(run=cmd_check)
    p = sub.add_parser("cosheafify", help="compute A# and its counit")
    common(p)
    p.add_argument("--out", help="write A# here")
    p.set_defaults(run=cmd_cosheafify)
    p = sub.add_parser("costalk", help="costalk at one point")
    common(p)
    p.add_argument("--point", required=True)
    p.set_defaults(run=cmd_costalk)
    p = sub.add_parser("smoothness", help="smoothness certificate")
    common(p)
    p.set_defaults(run=cmd_smoothness)
    p = sub.add_parser("verify-theorem5", help="compare (datum^LC)# with the component cosheaf")
    common(p, precosheaf=False)
    p.add_argument("--set", help="comma-separated atoms of S")
    p.add_argument("--group", type=_int_list, help="cyclic orders of A, 0 for Z (e.g. 2,0)")
    p.set_defaults(run=cmd_verify_theorem5)
    p = sub.add_parser("examples", help="write a built-in space and precosheaf")
    p.add_argument("name")
    p.add_argument("--out", help="directory to write into (default: current)")
    p.add_argument("--report", help="also write the report to this path")
    p.set_defaults(run=cmd_examples)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    inputs = [getattr(args, k) for k in ("space", "precosheaf") if getattr(args, k, None)]
    start = time.perf_counter()
    try:
        body, ok = args.run(args)
        digest = _digest(inputs)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"error: budget exceeded: {exc}", file=sys.stderr)
        return 2
    report = {
        "command": args.command,
        "inputs_sha256": digest,
        "report": body,
        "timing": {"seconds": round(time.perf_counter() - start, 6)},
    }
    text = dumps(report)
    sys.stdout.write(text)
    if args.report:
        Path(args.report).write_text(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
