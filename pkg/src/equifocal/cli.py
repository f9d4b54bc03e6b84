"""Command-line entry point: ``equifocal <command> ...``.

Exit codes: 0 success (all rows match), 1 mismatch, 2 usage or data error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import adnum, focal, hermann, rootsys, symcat
from .reflgroup import generate_finite, root_reflections, weyl_group_order

EXIT_OK, EXIT_MISMATCH, EXIT_ERROR = 0, 1, 2

DATA_ERRORS = (symcat.CatalogError, rootsys.RootSystemError, hermann.HermannError,
               focal.FocalError, adnum.ModelError, ValueError)


class UsageError(ValueError):
    pass


def _write(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _csv(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\r\n", extrasaction="ignore")
    w.writeheader()
    for r in rows:
        w.writerow({k: (str(v).lower() if isinstance(v, bool) else v) for k, v in r.items()})
    return buf.getvalue()


def _vector(text: str) -> rootsys.ExactVector:
    try:
        return rootsys.ExactVector.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse vector {text!r}") from exc


def _j_range(text: str):
    t = text.strip()
    if not t:
        return []
    for sep in ("..", ":"):
        if sep in t:
            lo, hi = t.split(sep, 1)
            return (int(lo), int(hi))
    return [int(x) for x in t.split(",")]


def _find_action(name: str, args) -> hermann.HermannActionDescriptor:
    actions = hermann.load_hermann_catalog(args.catalog, args.spaces)
    for a in actions:
        if name in (a.key, f"{a.h_label}@{a.space.key}"):
            return a
    raise symcat.CatalogError(f"no Hermann action {name!r} (see 'equifocal arrange --list')")


# ---------------------------------------------------------------- commands

TABLE1_COLUMNS = ["label", "name", "n_pos", "n_mult1", "m", "expected_m", "match"]
HERMANN_COLUMNS = ["h_label", "space", "computed", "expected", "match"]


def cmd_table1(args) -> int:
    rows = symcat.table1_rows(symcat.catalog_load(args.catalog))
    _write(_csv(TABLE1_COLUMNS, rows), args.out)
    return EXIT_OK if all(r["match"] for r in rows) else EXIT_MISMATCH


def cmd_hermann(args) -> int:
    rows = hermann.hermann_rows(hermann.load_hermann_catalog(args.catalog, args.spaces))
    _write(_csv(HERMANN_COLUMNS, rows), args.out)
    return EXIT_OK if all(r["match"] for r in rows) else EXIT_MISMATCH


def cmd_arrange(args) -> int:
    if args.list:
        for a in hermann.load_hermann_catalog(args.catalog, args.spaces):
            if a.has_split:
                sys.stdout.write(a.key + "\n")
        return EXIT_OK
    if not args.action or args.xi is None:
        raise UsageError("arrange needs an action and --xi")
    action = _find_action(args.action, args)
    arr = focal.hermann_focal_arrangement(action, _vector(args.xi), _j_range(args.j_range))
    _write(focal.arrangement_csv(arr), args.out)
    if args.svg:
        if action.root_system.rank() != 2:
            raise UsageError("SVG output needs a rank-2 section")
        Path(args.svg).write_text(focal.arrangement_svg(arr))
    return EXIT_OK


def cmd_spectra(args) -> int:
    action = _find_action(args.action, args)
    xi = hermann.to_ambient(action, _vector(args.xi))
    eta = hermann.to_ambient(action, _vector(args.eta))
    values = hermann.orbit_spectrum(action, xi, eta)
    report = {
        "action": action.key,
        "values": [{"kind": v.kind, "root": [str(c) for c in v.root.vector],
                    "value": v.evaluate(xi, eta)} for v in values],
        "max_distinct_spec": hermann.max_distinct_spec(action),
        "numeric_distinct": hermann.numeric_distinct_count(action, xi.to_float(), eta.to_float(), args.tol),
        "proper": hermann.properness_check(action, xi, eta),
    }
    sys.stdout.write(json.dumps(report, indent=1, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_focal_radii(args) -> int:
    radii = focal.complex_focal_radii(args.lam, args.beta, _j_range(args.j_range))
    sys.stdout.write(json.dumps([[z.real, z.imag] for z in radii]) + "\n")
    return EXIT_OK


def cmd_roots_check(args) -> int:
    rs = rootsys.build_root_system(args.type, args.rank)
    if args.subspace:
        rs = rootsys.restrict(rs, [_vector(v) for v in args.subspace.split(";")])
    cond = rootsys.check_root_system_conditions(rs)
    report = {"roots": len(rs), "rank": rs.rank(), "weakly_root_system": cond.cond_i,
              "crystallographic": cond.cond_ii, "reduced": cond.cond_iii,
              "components": len(rootsys.decompose(rs))}
    sys.stdout.write(json.dumps(report, sort_keys=True) + "\n")
    return EXIT_OK if cond.cond_i else EXIT_MISMATCH


def cmd_weyl_order(args) -> int:
    rs = rootsys.build_root_system(args.type, args.rank)
    group = generate_finite(root_reflections(rs, simple=True), max_order=args.max_order)
    expected = weyl_group_order(args.type, args.rank)
    report = {"type": args.type.upper(), "rank": args.rank, "order": group.order,
              "complete": group.is_complete, "expected": expected}
    sys.stdout.write(json.dumps(report, sort_keys=True) + "\n")
    if not group.is_complete:
        return EXIT_ERROR
    return EXIT_OK if group.order == expected else EXIT_MISMATCH


def cmd_oracle(args) -> int:
    model = adnum.make_model(args.family, args.params)
    report = adnum.run_oracle(model, trials=args.trials, seed=args.seed)
    sys.stdout.write(json.dumps(report, sort_keys=True) + "\n")
    return EXIT_OK if report["ok"] else EXIT_MISMATCH


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="equifocal", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    p.add_argument("--trials", type=int, default=100, help="trials for randomized checks")
    sub = p.add_subparsers(dest="command", required=True)

    def catalogs(sp, hermann_too=False):
        sp.add_argument("--catalog", help="catalog JSON (default: shipped data)")
        if hermann_too:
            sp.add_argument("--spaces", help="symmetric-space catalog used to resolve space references")
        sp.add_argument("--out", help="output file (default: stdout)")

    sp = sub.add_parser("table1", help="reproduce m_{G/K} for every symmetric space")
    catalogs(sp)
    sp.set_defaults(func=cmd_table1)

    sp = sub.add_parser("hermann", help="max number of principal curvatures for Hermann actions")
    catalogs(sp, True)
    sp.set_defaults(func=cmd_hermann)

    sp = sub.add_parser("arrange", help="focal hyperplane arrangement of a Hermann orbit")
    catalogs(sp, True)
    sp.add_argument("action", nargs="?", help="'H on SPACE[params]' as listed by --list")
    sp.add_argument("--xi", help="basepoint, comma-separated rationals (section or ambient)")
    sp.add_argument("--j-range", default="-3..3", help="lo..hi inclusive, or a comma list")
    sp.add_argument("--svg", help="write the real slice as SVG (rank 2)")
    sp.add_argument("--list", action="store_true", help="list actions with per-root data")
    sp.set_defaults(func=cmd_arrange)

    sp = sub.add_parser("spectra", help="principal curvatures of a Hermann orbit")
    catalogs(sp, True)
    sp.add_argument("action")
    sp.add_argument("--xi", required=True)
    sp.add_argument("--eta", required=True)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.set_defaults(func=cmd_spectra)

    sp = sub.add_parser("focal-radii", help="complex focal radii for one eigenvalue")
    sp.add_argument("--lambda", dest="lam", type=float, required=True)
    sp.add_argument("--beta", type=float, required=True, help="beta(v) >= 0")
    sp.add_argument("--j-range", default="-3..3")
    sp.set_defaults(func=cmd_focal_radii)

    sp = sub.add_parser("roots-check", help="root-system axioms, optionally after restriction")
    sp.add_argument("type")
    sp.add_argument("rank", type=int, nargs="?")
    sp.add_argument("--subspace", help="basis vectors separated by ';'")
    sp.set_defaults(func=cmd_roots_check)

    sp = sub.add_parser("weyl-order", help="order of the Weyl group by closure")
    sp.add_argument("type")
    sp.add_argument("rank", type=int, nargs="?")
    sp.add_argument("--max-order", type=int, default=10**6)
    sp.set_defaults(func=cmd_weyl_order)

    sp = sub.add_parser("oracle", help="matrix-model oracle suite")
    sp.add_argument("family", choices=["sl_n_R", "so_p_q"])
    sp.add_argument("params", type=int, nargs="+")
    sp.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, *DATA_ERRORS, TypeError) as exc:
        print(f"equifocal {args.command}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
