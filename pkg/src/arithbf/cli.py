"""Command-line front end.

Exit codes: 0 match/pass, 1 identity mismatch, 2 input error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .abgroup import InvariantFactors
from .bf_av import AVModel, ModelError, random_model
from .bf_gm import FieldData
from .pathsum import DEFAULT_PAIR_BUDGET, BudgetExceeded, PhaseSumError
from .quadforms import DEFAULT_MAX_CLASS_NUMBER, DiscriminantError, check_fundamental, class_group
from .reports import av_report, classgroup_dict, gm_report, to_json, to_text

log = logging.getLogger("arithbf")

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3

DEFAULT_MAX_N = 1000
DEFAULT_MAX_DISC = 10**6


class InputError(Exception):
    pass


class LimitError(Exception):
    pass


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _int_list(data: dict, key: str, where: str) -> list[int]:
    v = data.get(key, [])
    if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        raise InputError(f"{where}: '{key}' must be a list of integers")
    return v


def _int(data: dict, key: str, where: str) -> int:
    if key not in data:
        raise InputError(f"{where}: missing '{key}'")
    v = data[key]
    if not isinstance(v, int) or isinstance(v, bool):
        raise InputError(f"{where}: '{key}' must be an integer")
    return v


def load_field_data(path: str) -> FieldData:
    """Read a FieldDataFile (JSON) and check it for internal consistency."""
    data = _load_json(path)
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    try:
        return FieldData(
            label=str(data.get("label", path)),
            cl=InvariantFactors(tuple(_int_list(data, "class_group_invariants", path))),
            unit_rank=_int(data, "unit_rank", path),
            w=_int(data, "roots_of_unity_order", path),
            degree=_int(data, "degree", path),
        )
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


def parse_av_model(data, where: str = "model") -> AVModel:
    if not isinstance(data, dict):
        raise InputError(f"{where}: expected a JSON object")
    delta = data.get("delta", "canonical")
    if isinstance(delta, dict):
        if "matrix" in delta:
            rows = delta["matrix"]
            if not isinstance(rows, list) or not all(
                isinstance(r, list) and all(isinstance(x, int) for x in r) for r in rows
            ):
                raise InputError(f"{where}: delta.matrix must be a list of integer rows")
            delta = tuple(tuple(r) for r in rows)
        elif "seed" in delta and isinstance(delta["seed"], int):
            delta = delta["seed"]
        else:
            raise InputError(f"{where}: delta must be \"canonical\", {{\"matrix\": ...}} or {{\"seed\": int}}")
    elif delta != "canonical":
        raise InputError(f"{where}: delta must be \"canonical\", {{\"matrix\": ...}} or {{\"seed\": int}}")
    try:
        return AVModel(
            n=_int(data, "n", where),
            mw_a=_int_list(data, "mw_a", where),
            mw_b=_int_list(data, "mw_b", where),
            sha_a=_int_list(data, "sha_a", where),
            sha_b=_int_list(data, "sha_b", where),
            delta=delta,
            label=data.get("label"),
            source=data.get("source"),
        )
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from None


def _emit(report: dict, fmt: str):
    print(to_json(report) if fmt == "json" else to_text(report))


def _check_disc(D: int, max_disc: int):
    if abs(D) > max_disc:
        raise LimitError(f"|D| = {abs(D)} exceeds --max-disc {max_disc}")
    try:
        check_fundamental(D)
    except DiscriminantError as exc:
        raise InputError(str(exc)) from None


def cmd_classgroup(args) -> int:
    _check_disc(args.disc, args.max_disc)
    try:
        cg = class_group(args.disc, max_class_number=args.max_class_number)
    except DiscriminantError as exc:
        raise InputError(str(exc)) from None
    except ValueError as exc:
        raise LimitError(str(exc)) from None
    _emit(classgroup_dict(cg), args.format)
    return EXIT_OK


def cmd_gm(args) -> int:
    if args.n < 1:
        raise InputError("--n must be >= 1")
    if args.n > args.max_n:
        raise LimitError(f"n = {args.n} exceeds --max-n {args.max_n}")
    if (args.disc is None) == (args.field_data is None):
        raise InputError("give exactly one of --disc or --field-data")
    if args.disc is not None:
        _check_disc(args.disc, args.max_disc)
        try:
            field = FieldData.from_discriminant(args.disc, args.max_class_number)
        except ValueError as exc:
            raise LimitError(str(exc)) from None
        ingested = False
    else:
        field = load_field_data(args.field_data)
        ingested = True
    report = gm_report(
        field, args.n, mode=args.mode, shortcut=not args.no_shortcut,
        jobs=args.jobs, budget=args.budget_pairs, ingested=ingested,
    )
    _emit(report, args.format)
    return EXIT_MISMATCH if report["match"] is False else EXIT_OK


def cmd_av(args) -> int:
    if args.random:
        if args.model:
            raise InputError("--model and --random are exclusive")
        if args.n is None or args.n < 2:
            raise InputError("--random needs --n >= 2")
        if args.n > args.max_n:
            raise LimitError(f"n = {args.n} exceeds --max-n {args.max_n}")
        model = random_model(args.seed, args.n)
    elif args.model:
        model = parse_av_model(_load_json(args.model), args.model)
        if model.n > args.max_n:
            raise LimitError(f"n = {model.n} exceeds --max-n {args.max_n}")
    else:
        raise InputError("give --model PATH or --random --seed S --n N")
    try:
        report = av_report(model, jobs=args.jobs, budget=args.budget_pairs)
    except ModelError as exc:
        raise InputError(str(exc)) from None
    _emit(report, args.format)
    return EXIT_MISMATCH if report["match"] is False else EXIT_OK


def cmd_selftest(args) -> int:
    from .selftest import run_battery

    results = run_battery(args.scope, corrupt_pairing=args.corrupt_pairing)
    if args.format == "json":
        print(json.dumps(
            [{"check": r.name, "pass": r.ok, "detail": r.detail} for r in results], indent=2
        ))
    else:
        for r in results:
            print(f"{'PASS' if r.ok else 'FAIL'}  {r.name:<28} {r.detail}  [{r.elapsed:.2f}s]")
        failed = [r.name for r in results if not r.ok]
        print(f"{len(results) - len(failed)}/{len(results)} checks passed"
              + (f"; failed: {', '.join(failed)}" if failed else ""))
    return EXIT_OK if all(r.ok for r in results) else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--quiet", action="store_true", help="suppress log messages")
    common.add_argument("--jobs", type=int, default=1, help="worker threads for enumeration")
    common.add_argument("--budget-pairs", type=int, default=DEFAULT_PAIR_BUDGET)
    common.add_argument("--max-n", type=int, default=DEFAULT_MAX_N)
    common.add_argument("--max-disc", type=int, default=DEFAULT_MAX_DISC)
    common.add_argument("--max-class-number", type=int, default=DEFAULT_MAX_CLASS_NUMBER)

    parser = argparse.ArgumentParser(
        prog="arithbf", description="Exact arithmetic BF path integrals."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classgroup", parents=[common], help="class group of an imaginary quadratic field")
    p.add_argument("--disc", type=int, required=True)
    p.set_defaults(func=cmd_classgroup)

    p = sub.add_parser("gm", parents=[common], help="path integral for G_m over a totally imaginary field")
    p.add_argument("--disc", type=int)
    p.add_argument("--field-data", metavar="PATH")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=("brute", "closed", "both"), default="both")
    p.add_argument("--no-shortcut", action="store_true", help="enumerate every unit class explicitly")
    p.set_defaults(func=cmd_gm)

    p = sub.add_parser("av", parents=[common], help="path integral for a synthetic abelian-variety model")
    p.add_argument("--model", metavar="PATH")
    p.add_argument("--random", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_av)

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance battery")
    p.add_argument("scope", nargs="?", choices=("quick", "full"), default="quick")
    p.add_argument("--corrupt-pairing", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.ERROR if args.quiet else logging.WARNING,
        format="arithbf: %(levelname)s: %(message)s",
    )
    if args.jobs < 1:
        log.error("--jobs must be >= 1")
        return EXIT_INPUT
    try:
        return args.func(args)
    except InputError as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    except (LimitError, BudgetExceeded) as exc:
        log.error("%s", exc)
        return EXIT_LIMIT
    except PhaseSumError as exc:
        log.error("internal error: %s", exc)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
