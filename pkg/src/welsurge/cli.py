"""Command-line driver.

Exit status: 0 success, 1 validation failure, 2 missing table entry in
strict mode, 3 parse error (including bad argv), 4 precondition failure.
Relation subcommands print one line per term (index, coefficient, key,
resolved value, source) followed by ``RESULT <value>``; ``--tsv`` switches
to tab-separated rows only.  Warnings go to stderr and never change a
successful exit status unless ``--strict`` is given.
"""
from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import fixtures
from .coeffs import check_identities
from .errors import PreconditionFailed, WelsurgeError
from .lattice import parse_class
from .realform import ConfigSpec, RealSurfaceModel, load_models, validate_config
from .relations import (
    RelationResult,
    classify_quadric,
    compose_check,
    correspondence,
    genus_decreasing,
    invert_relative,
    parse_tangency,
    unscrew_relation,
    wall_cross,
)
from .tables import load_table


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; remap to the parse-error status.
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(3, f"{self.prog}: error: {message}\n")


def _parse_r(text: str) -> tuple[int, ...]:
    cleaned = text.strip()
    if cleaned.startswith("(") and cleaned.endswith(")"):
        cleaned = cleaned[1:-1]
    try:
        return tuple(int(x) for x in cleaned.split(","))
    except ValueError:
        from .errors import ParseError

        raise ParseError(f"bad point-count vector {text!r}") from None


def _print_relation(result: RelationResult, tsv: bool) -> None:
    for t in result.terms:
        value = "MISSING" if t.resolved is None else str(t.resolved)
        if tsv:
            print(f"{t.k}\t{t.coefficient}\t{t.key.canonical()}\t{value}\t{t.source}")
        else:
            print(f"k={t.k} coeff={t.coefficient} {t.key.canonical()} -> {value} [{t.source}]")
    if result.undefined:
        print("RESULT\tUNDEFINED" if tsv else "RESULT UNDEFINED")
    else:
        print(f"RESULT\t{result.value}" if tsv else f"RESULT {result.value}")


def _finish_relation(result: RelationResult, tsv: bool) -> int:
    for note in result.warnings:
        print(f"warning: {note}", file=sys.stderr)
    _print_relation(result, tsv)
    return 2 if result.undefined else 0


def _pick_model(models: dict[str, RealSurfaceModel], surface_id: str) -> RealSurfaceModel:
    if surface_id not in models:
        raise PreconditionFailed(f"model file defines no surface {surface_id!r}")
    return models[surface_id]


def _cmd_identities(args: argparse.Namespace) -> int:
    report = check_identities(args.max)
    for line in report.lines():
        print(line.replace(" ", "\t", 1) if args.tsv else line)
    print(f"RESULT\t{'PASS' if report.passed else 'FAIL'}" if args.tsv else f"RESULT {'PASS' if report.passed else 'FAIL'}")
    return 0 if report.passed else 1


def _cmd_compose_check(args: argparse.Namespace) -> int:
    report = compose_check(args.depth)
    for i, coefficient in report.series.entries:
        print(f"{i}\t{coefficient}" if args.tsv else f"i={i} coefficient={coefficient}")
    if report.passed:
        print("RESULT\tPASS" if args.tsv else "RESULT PASS")
        return 0
    print(f"RESULT\tFAIL\t{report.first_failure}" if args.tsv else f"RESULT FAIL at index {report.first_failure}")
    return 1


def _cmd_gdf(args: argparse.Namespace) -> int:
    models = load_models(args.models)
    model_y = _pick_model(models, args.Y)
    sphere = parse_class(args.S, model_y.surface.lattice)
    x_id = args.X
    if x_id is None:
        for link in model_y.surgery_links:
            if link.role == "Y" and (link.sphere == sphere or args.S is None):
                x_id = link.partner
                break
        if x_id is None:
            raise PreconditionFailed(
                f"surface {args.Y!r} has no surgery link matching S; pass --X explicitly"
            )
    model_x = _pick_model(models, x_id)
    table = load_table(args.table, models)
    d = parse_class(args.d, model_y.surface.lattice)
    result = genus_decreasing(
        table,
        model_y,
        model_x,
        d,
        sphere,
        _parse_r(args.r),
        components=args.L.split(",") if args.L else None,
        f_tag=args.F,
        strict=args.strict,
    )
    return _finish_relation(result, args.tsv)


def _relative_args(args: argparse.Namespace):
    models = load_models(args.models)
    model = _pick_model(models, args.surface)
    table = load_table(args.table, models)
    d = parse_class(args.d, model.surface.lattice)
    divisor = parse_class(args.E, model.surface.lattice)
    components = args.L.split(",") if args.L else None
    return table, model, d, divisor, _parse_r(args.r), components


def _cmd_correspond(args: argparse.Namespace) -> int:
    table, model, d, divisor, r, components = _relative_args(args)
    result = correspondence(
        table, model, d, divisor, r, components=components, f_tag=args.F, strict=args.strict
    )
    return _finish_relation(result, args.tsv)


def _cmd_invert(args: argparse.Namespace) -> int:
    table, model, d, divisor, r, components = _relative_args(args)
    result = invert_relative(
        table, model, d, divisor, r, components=components, f_tag=args.F, strict=args.strict
    )
    return _finish_relation(result, args.tsv)


def _cmd_unscrew(args: argparse.Namespace) -> int:
    table, model, d, divisor, r, components = _relative_args(args)
    result = unscrew_relation(
        table, model, d, divisor, r, components=components, f_tag=args.F, strict=args.strict
    )
    return _finish_relation(result, args.tsv)


def _cmd_wallcross(args: argparse.Namespace) -> int:
    value = wall_cross(args.value, args.correction)
    print(f"RESULT\t{value}" if args.tsv else f"RESULT {value}")
    return 0


def _cmd_classify(args: argparse.Namespace) -> int:
    d = parse_class(args.d)
    outcome = classify_quadric(
        d, parse_tangency(args.alpha), parse_tangency(args.beta), args.off_e
    )
    if args.tsv:
        fields = ["RESULT", outcome.outcome]
        if outcome.case is not None:
            fields.append(str(outcome.case))
        print("\t".join(fields))
    else:
        print(f"RESULT {outcome}")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    models = load_models(args.models)
    model = _pick_model(models, args.surface)
    d = parse_class(args.d, model.surface.lattice)
    r = _parse_r(args.r)
    chosen = tuple(args.L.split(",")) if args.L else model.component_names()
    cfg = ConfigSpec(
        d=d,
        g=len(r) - 1,
        chosen=chosen,
        r=r,
        m=args.m,
        f_tag=args.F,
        nef_asserted=args.nef,
    )
    surgery = parse_class(args.S, model.surface.lattice) if args.S else None
    report = validate_config(model, cfg, surgery=surgery)
    for line in report.lines():
        print(line.replace(" ", "\t", 2) if args.tsv else line)
    for note in report.warnings:
        print(f"warning: {note}", file=sys.stderr)
    if report.nef_asserted:
        print("note: nef asserted by the caller, not checked", file=sys.stderr)
    print(f"RESULT\t{'PASS' if report.passed else 'FAIL'}" if args.tsv else f"RESULT {'PASS' if report.passed else 'FAIL'}")
    return 0 if report.passed else 1


def _cmd_reproduce(args: argparse.Namespace) -> int:
    run = fixtures.example_run(args.example)
    models = fixtures.example_models(args.example)
    table = fixtures.example_table(args.example)
    if run.note:
        print(f"warning: {run.note}", file=sys.stderr)
    status = 0
    for r in run.r_rows:
        if not args.tsv:
            print(f"# r = ({','.join(str(x) for x in r)})")
        result = genus_decreasing(
            table,
            models[run.y_id],
            models[run.x_id],
            run.d,
            run.sphere,
            r,
            strict=args.strict,
        )
        code = _finish_relation(result, args.tsv)
        status = status or code
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="welsurge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--tsv", action="store_true", help="emit tab-separated rows only")
        return p

    p = add("identities", _cmd_identities, "verify the coefficient identities exactly")
    p.add_argument("--max", type=int, default=60, help="largest index to check")

    p = add("compose-check", _cmd_compose_check, "compose degeneration and inversion coefficients")
    p.add_argument("--depth", type=int, default=40, help="largest shift index to check")

    def relation_flags(p: argparse.ArgumentParser, with_surface: bool) -> None:
        p.add_argument("--models", required=True, help="model file")
        p.add_argument("--table", required=True, help="invariant table file")
        if with_surface:
            p.add_argument("--surface", required=True, help="surface id the table keys use")
            p.add_argument("--E", required=True, help="divisor class")
        p.add_argument("--d", required=True, help="class to evaluate")
        p.add_argument("--r", required=True, help="real point counts, e.g. 5,1")
        p.add_argument("--L", default=None, help="chosen component names, comma separated")
        p.add_argument("--F", default="0", help="twisting tag (table key field)")
        p.add_argument("--strict", action="store_true", help="undefined on missing entries")

    p = add("gdf", _cmd_gdf, "evaluate the genus-decreasing relation")
    relation_flags(p, with_surface=False)
    p.add_argument("--Y", required=True, help="surgered surface id")
    p.add_argument("--X", default=None, help="base surface id (default: from the surgery link)")
    p.add_argument("--S", required=True, help="surgery sphere class")

    p = add("correspond", _cmd_correspond, "absolute count from relative counts")
    relation_flags(p, with_surface=True)

    p = add("invert", _cmd_invert, "relative count from absolute counts")
    relation_flags(p, with_surface=True)

    p = add("unscrew", _cmd_unscrew, "degeneration sum over relative counts")
    relation_flags(p, with_surface=True)

    p = add("wallcross", _cmd_wallcross, "apply the wall-crossing step")
    p.add_argument("--value", type=int, required=True, help="count at r real points")
    p.add_argument("--correction", type=int, required=True, help="correction invariant")

    p = add("classify-quadric", _cmd_classify, "classify a quadric tangency problem")
    p.add_argument("--d", required=True, help="quadric class, e.g. (1,1)")
    p.add_argument("--alpha", default="0", help="fixed-point tangencies, e.g. 1:2")
    p.add_argument("--beta", default="0", help="free tangencies")
    p.add_argument("--off-e", dest="off_e", type=int, default=0, help="points away from the divisor")

    p = add("validate", _cmd_validate, "check a counting configuration")
    p.add_argument("--models", required=True)
    p.add_argument("--surface", required=True)
    p.add_argument("--d", required=True)
    p.add_argument("--r", required=True)
    p.add_argument("--L", default=None)
    p.add_argument("--m", type=int, default=0, help="number of conjugate point pairs")
    p.add_argument("--F", default="0")
    p.add_argument("--S", default=None, help="surgery sphere to check orthogonality against")
    p.add_argument("--nef", action="store_true", help="record a user nef assertion")

    p = add("reproduce", _cmd_reproduce, "rerun a worked example from embedded fixtures")
    p.add_argument("--example", type=int, required=True, choices=(1, 2))
    p.add_argument("--strict", action="store_true")

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except WelsurgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
