"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a mathematical check fails
(the output carries a witness), 2 for invalid input.  JSON output uses
sorted keys and contains nothing run-dependent.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import families as fam
from .squares import MapTable, MultiDiagram, multi_diagram_inverse
from .errors import InputError, NotBijectiveError, PPForgeError
from .field import TowerCtx, parse_field_spec
from .groups import (
    enumerate_G_phi,
    residue_phi,
    verify_base_normal,
    verify_group_axioms,
)
from .polyfun import (
    FuncTable,
    Poly,
    brute_inverse,
    collision,
    interpolate,
    is_involution,
    is_permutation,
)
from .sweep import DEFAULT_DRAWS, DEFAULT_GRID, run_sweep


FAMILY_KINDS = ("ai-sum", "ai-involution", "trace")
# short names kept for compatibility with existing scripts
FAMILY_ALIASES = {"thm63": "ai-sum", "cor64": "ai-involution", "thm65": "trace"}


class Failed(Exception):
    """Carries a report whose verdict is negative."""

    def __init__(self, report):
        super().__init__("verification failed")
        self.report = report


def _ints(text):
    if text is None:
        return None
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {text!r}") from None


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise InputError("missing " + ", ".join("--" + n for n in missing))


def cmd_field(args):
    _require(args, "field")
    F = parse_field_spec(args.field, ceiling=args.ceiling)
    return {
        "p": F.p,
        "n": F.n,
        "modulus": list(F.modulus),
        "generator": F.generator,
        "order": F.order,
    }


def _field_and_poly(args):
    _require(args, "field", "poly")
    F = parse_field_spec(args.field, ceiling=args.ceiling)
    return F, Poly.parse(F, args.poly)


def cmd_verify(args):
    F, f = _field_and_poly(args)
    table = f.to_table()
    report = {
        "field": F.spec,
        "poly": list(f.coeffs),
        "is_pp": is_permutation(table),
        "is_involution": is_involution(table),
    }
    if not report["is_pp"]:
        report["witness"] = list(collision(table))
        raise Failed(report)
    return report


def cmd_invert(args):
    F, f = _field_and_poly(args)
    table = f.to_table()
    oracle = brute_inverse(table)  # raises with a collision pair when f is not a PP
    report = {"field": F.spec, "poly": list(f.coeffs)}
    if args.diagrams:
        with open(args.diagrams) as fh:
            md = MultiDiagram.from_json(json.load(fh))
        if not np.array_equal(md.f.images, table.images):
            raise InputError("diagram file describes a different f")
        images = multi_diagram_inverse(md, ceiling=args.ceiling).images
        report["method"] = "diagrams"
    else:
        images = oracle.images
        report["method"] = "brute"
    inverse = interpolate(FuncTable(F, images))
    report["inverse"] = list(inverse.coeffs)
    report["oracle_match"] = bool(np.array_equal(images, oracle.images))
    if not report["oracle_match"]:
        raise Failed(report)
    return report


def _tower(args):
    _require(args, "q", "d")
    return TowerCtx(args.q, args.d, ceiling=args.ceiling)


def cmd_family(args):
    tower = _tower(args)
    kind = FAMILY_ALIASES.get(args.kind, args.kind)
    report = {"kind": kind, "q": tower.q, "d": tower.d, "field": tower.field.spec}
    if kind == "ai-sum":
        _require(args, "u", "m")
        params = fam.AiSumParams(tower, _ints(args.u), _ints(args.m))
        verdict = fam.ai_sum_is_pp(params)
        table = fam.ai_sum_table(params)
        inverse = fam.ai_sum_inverse if verdict.is_pp else None
        report["exponents_r"] = list(params.exponents())
    elif kind == "trace":
        _require(args, "u1", "u2", "m")
        m = _ints(args.m)
        if len(m) != 1:
            raise InputError("the trace family takes a single exponent --m")
        params = fam.TraceParams(tower, args.u1, args.u2, m[0])
        verdict = fam.trace_is_pp(params)
        table = fam.trace_table(params)
        inverse = fam.trace_inverse if verdict.is_pp else None
        report["exponent_r"] = params.r
    elif kind == "ai-involution":
        _require(args, "u")
        u = _ints(args.u)
        params = fam.AiSumParams(tower, u, (tower.q**tower.d - 2,) * tower.d)
        if not fam.involution_condition(tower, u):
            raise InputError("u_i * w^i must be the same nonzero value for every i")
        verdict = fam.ai_sum_is_pp(params)
        table = fam.ai_involution_table(tower, u)
        inverse = fam.ai_sum_inverse
        report["involution"] = is_involution(table)
    else:
        raise InputError(f"unknown family {kind!r}")
    report["f"] = list(interpolate(table).coeffs)
    report["is_pp"] = verdict.is_pp
    report["conditions"] = verdict.conditions
    report["exhaustive_is_pp"] = verdict.exhaustive
    failed = verdict.is_pp != verdict.exhaustive
    if verdict.witness is not None:
        report["witness"] = list(verdict.witness)
    if inverse is not None and verdict.exhaustive:
        try:
            formula = inverse(params, verify=False)
            oracle = interpolate(brute_inverse(table))
            report["inverse"] = list(formula.coeffs)
            report["oracle_match"] = formula == oracle
        except NotBijectiveError:
            report["oracle_match"] = False
        failed |= not report["oracle_match"]
    if kind == "ai-involution":
        failed |= not report["involution"]
    if failed:
        raise Failed(report)
    return report


def cmd_group(args):
    _require(args, "n", "d")
    if args.phi:
        images = _ints(args.phi)
        if len(images) != args.n:
            raise InputError(f"--phi needs {args.n} entries")
        phi = MapTable(images, args.d)
    else:
        phi = residue_phi(args.n, args.d)
    census = enumerate_G_phi(phi, ceiling=args.group_ceiling, strict=args.strict)
    report = census.summary()
    axioms = verify_group_axioms(census)
    normal = verify_base_normal(census)
    report["axioms"] = axioms.checks
    report["base_normal"] = normal.checks
    if not (axioms.ok and normal.ok and report["match"] is not False):
        report["violations"] = axioms.violations + normal.violations
        raise Failed(report)
    return report


def _grid(text):
    if not text:
        return DEFAULT_GRID
    out = []
    for item in text.split(","):
        q, _, d = item.partition(":")
        try:
            out.append((int(q), int(d)))
        except ValueError:
            raise InputError(f"bad grid entry {item!r}; expected q:d") from None
    return tuple(out)


def cmd_sweep(args):
    report = run_sweep(
        grid=_grid(args.grid),
        seed=args.seed,
        draws=args.draws,
        ceiling=args.ceiling,
        workers=args.workers,
        suites=_suites(args.suites),
    )
    if not report["ok"]:
        raise Failed(report)
    return report


def _suites(text):
    if not text:
        return None
    names = [s.strip() for s in text.split(",") if s.strip()]
    allowed = {"identities", "ai_sum", "involution", "trace"}
    bad = [s for s in names if s not in allowed]
    if bad:
        raise InputError(f"unknown suites {bad}")
    return names


COMMANDS = {
    "field": cmd_field,
    "verify": cmd_verify,
    "invert": cmd_invert,
    "family": cmd_family,
    "group": cmd_group,
    "sweep": cmd_sweep,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--ceiling", type=int, default=None,
                        help="largest field order for exhaustive work (env PPFORGE_CEILING)")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="ppforge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field", parents=[common], help="describe a finite field")
    p.add_argument("--field")

    for name, text in (("verify", "test a polynomial for bijectivity"), ("invert", "compositional inverse")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--field")
        p.add_argument("--poly", help="coefficients c0,c1,... as element indices")
        if name == "invert":
            p.add_argument("--diagrams", help="multi-diagram JSON file to invert through")

    p = sub.add_parser("family", parents=[common], help="build and check a family instance")
    p.add_argument("kind", choices=FAMILY_KINDS + tuple(FAMILY_ALIASES))
    p.add_argument("--q", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--u")
    p.add_argument("--m")
    p.add_argument("--u1", type=int)
    p.add_argument("--u2", type=int)

    p = sub.add_parser("group", parents=[common], help="census of phi-compatible bijections")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--phi", help="images of phi as a comma list; default a mod d")
    p.add_argument("--strict", action="store_true", help="require phi to be Z_n -> Z_d")
    p.add_argument("--group-ceiling", type=int, default=8)

    p = sub.add_parser("sweep", parents=[common], help="run the family grid")
    p.add_argument("--grid", help="comma list of q:d, default the full test grid")
    p.add_argument("--draws", type=int, default=DEFAULT_DRAWS)
    p.add_argument("--suites", help="subset of identities,ai_sum,involution,trace")
    return parser


def _emit(report, fmt, stream):
    if fmt == "json":
        stream.write(json.dumps(report, sort_keys=True) + "\n")
    else:
        for key in sorted(report):
            stream.write(f"{key}: {report[key]}\n")


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        report = COMMANDS[args.command](args)
    except Failed as exc:
        _emit(exc.report, args.format, sys.stdout)
        return 1
    except NotBijectiveError as exc:
        witness = exc.witness
        if isinstance(witness, tuple):
            witness = list(witness)
        _emit({"error": str(exc), "index": exc.index, "witness": witness}, args.format, sys.stdout)
        return 1
    except (InputError, ZeroDivisionError) as exc:
        sys.stderr.write(f"ppforge: error: {exc}\n")
        return 2
    except PPForgeError as exc:
        _emit({"error": str(exc), "witness": getattr(exc, "witness", None)}, args.format, sys.stdout)
        return 1
    _emit(report, args.format, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
