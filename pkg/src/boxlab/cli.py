"""Command-line front end.

Exit status: 0 on success, 1 when a check fails or a precondition does not
hold, 2 on usage and parse errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .boolfn import BooleanFunction, anf_decompose, best_affine_approx, format_anf
from .boxcore import is_non_signaling, success_probability
from .boxlib import noisy_box, full_correlation_box
from .distill import (
    FamilyError,
    NoisyFamily,
    PlanError,
    distill_trajectory,
    make_plan,
    plan_trajectory,
)
from .polytope import ORACLE_PORT_LIMIT, classify_fc_extremal, is_local, is_vertex, l1_distance_to_local
from .serialize import decimal, dump_plan, exact, load_plan, trajectory_csv, trajectory_table
from .specfile import BoxSpec, SpecError, parse_spec


class UsageError(Exception):
    pass


class CheckFailed(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read_spec(path: str) -> BoxSpec:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from e
    return parse_spec(text)


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _verdict(flag: bool, yes: str, no: str) -> str:
    return yes if flag else no


def cmd_check(args) -> int:
    spec = _read_spec(args.spec)
    f = spec.function
    box = noisy_box(f, spec.epsilon)
    everything = not (args.non_signaling or args.local or args.extremal)
    failed = False
    if everything or args.non_signaling:
        ns = is_non_signaling(box)
        print(f"non-signaling: {_verdict(ns.non_signaling, 'yes', 'no')}")
        failed |= not ns.non_signaling
    if everything or args.local:
        if spec.parties > ORACLE_PORT_LIMIT:
            print("local: skipped (size limit)")
        else:
            print(f"local: {_verdict(is_local(box).local, 'yes', 'no')}")
    if everything or args.extremal:
        theorem = classify_fc_extremal(f)
        line = f"theorem1: {_verdict(theorem, 'extremal', 'non-extremal')}"
        if spec.parties <= ORACLE_PORT_LIMIT:
            oracle = is_vertex(full_correlation_box(f))
            agree = oracle == theorem
            line += f"; vertex-oracle: {_verdict(oracle, 'extremal', 'non-extremal')}; {_verdict(agree, 'agree', 'disagree')}"
            failed |= not agree
        print(line)
    if failed:
        raise CheckFailed("check failed")
    return 0


def cmd_bell(args) -> int:
    spec = _read_spec(args.spec)
    f = spec.function
    box = noisy_box(f, spec.epsilon)
    p = success_probability(box, f)
    print(f"success_probability: {exact(p)} ({decimal(p)})")
    if spec.parties > ORACLE_PORT_LIMIT:
        raise CheckFailed(f"l1_distance_to_local needs at most {ORACLE_PORT_LIMIT} parties")
    d = l1_distance_to_local(box)
    print(f"l1_distance_to_local: {exact(d)} ({decimal(d)})")
    return 0


def cmd_plan(args) -> int:
    spec = _read_spec(args.spec)
    _write(args.out, dump_plan(make_plan(spec.function)))
    return 0


def _is_and(f: BooleanFunction) -> bool:
    return f.var_count >= 2 and f == BooleanFunction.conjunction(f.var_count)


def cmd_distill(args) -> int:
    spec = _read_spec(args.spec)
    f = spec.function
    if args.rounds < 0:
        raise UsageError("--rounds must be non-negative")
    if args.plan is None and _is_and(f):
        traj = distill_trajectory(NoisyFamily(f, spec.epsilon), args.rounds, args.precision_bits)
    else:
        if args.plan is not None:
            try:
                plan = load_plan(Path(args.plan).read_text())
            except OSError as e:
                raise UsageError(f"cannot read {args.plan}: {e.strerror}") from e
            if plan.function != f:
                raise PlanError("plan was made for a different function")
        else:
            plan = make_plan(f)
        traj = plan_trajectory(plan, spec.epsilon, args.rounds, args.precision_bits)
    _write(args.out, trajectory_csv(traj))
    if args.out not in (None, "-"):
        sys.stdout.write(trajectory_table(traj))
    return 0


def cmd_closest_local(args) -> int:
    spec = _read_spec(args.spec)
    approx = best_affine_approx(spec.function)
    print(f"g: {format_anf(anf_decompose(approx.function))}")
    print(f"hamming_distance: {approx.distance}")
    print(f"l1_distance: {2 * approx.distance}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="boxlab", description="Exact non-signaling box toolkit.")
    parser.add_argument("--json-errors", action="store_true", help="report errors as JSON on stderr")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("check", help="non-signaling / locality / extremality verdicts")
    p.add_argument("spec")
    p.add_argument("--non-signaling", action="store_true")
    p.add_argument("--local", action="store_true")
    p.add_argument("--extremal", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bell", help="success probability and L1 distance to the local polytope")
    p.add_argument("spec")
    p.set_defaults(func=cmd_bell)

    p = sub.add_parser("plan", help="emit the distillation plan as JSON")
    p.add_argument("spec")
    p.add_argument("--out")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("distill", help="run distillation and write the trajectory CSV")
    p.add_argument("spec")
    p.add_argument("--rounds", type=int, required=True)
    p.add_argument("--plan")
    p.add_argument("--out")
    p.add_argument("--precision-bits", type=int, default=None,
                   help="lower epsilon to this many binary digits after each round")
    p.set_defaults(func=cmd_distill)

    p = sub.add_parser("closest-local", help="best affine approximation of f")
    p.add_argument("spec")
    p.set_defaults(func=cmd_closest_local)
    return parser


def _fail(args_json: bool, code: int, kind: str, exc: Exception) -> int:
    if args_json:
        payload = {"error": kind, "message": getattr(exc, "message", str(exc)), "exit_code": code}
        if isinstance(exc, SpecError):
            payload["line"] = exc.line
            payload["column"] = exc.column
        sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        sys.stderr.write(f"boxlab: {kind}: {exc}\n")
    return code


def main(argv: list[str] | None = None) -> int:
    sys.set_int_max_str_digits(0)
    argv = sys.argv[1:] if argv is None else argv
    json_errors = "--json-errors" in argv
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        return args.func(args)
    except UsageError as e:
        return _fail(json_errors, 2, "usage", e)
    except SpecError as e:
        return _fail(json_errors, 2, "spec", e)
    except PlanError as e:
        return _fail(json_errors, 2, "plan", e)
    except CheckFailed as e:
        return _fail(json_errors, 1, "check", e)
    except (FamilyError, ValueError) as e:
        return _fail(json_errors, 1, "precondition", e)


if __name__ == "__main__":
    sys.exit(main())
