"""Plan JSON (``boxlab-plan/1``) and trajectory CSV."""
from __future__ import annotations

import csv
import io
import json
from decimal import Decimal, localcontext
from fractions import Fraction

from .boolfn import anf_decompose, format_anf, from_anf, mask_vars, monomial_mask
from .distill import STEP_TYPES, DistillationPlan, PlanError, Step, Trajectory, check_plan
from .specfile import parse_expr

PLAN_VERSION = "boxlab-plan/1"
CSV_COLUMNS = ("round", "epsilon", "success_prob", "l1_to_target")


def step_to_dict(step: Step) -> dict:
    return {
        "type": step.type,
        "term": list(step.term),
        "fixes": {str(k): v for k, v in sorted(step.fixes.items())},
        "rounds": step.rounds,
        "children": [step_to_dict(c) for c in step.children],
    }


def step_from_dict(d: dict) -> Step:
    try:
        if d["type"] not in STEP_TYPES:
            raise PlanError(f"unknown step type {d['type']!r}")
        return Step(
            d["type"],
            tuple(int(v) for v in d.get("term", [])),
            {int(k): int(v) for k, v in d.get("fixes", {}).items()},
            d.get("rounds"),
            [step_from_dict(c) for c in d.get("children", [])],
        )
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, PlanError):
            raise
        raise PlanError(f"malformed step: {e}") from e


def plan_to_dict(plan: DistillationPlan) -> dict:
    return {
        "version": PLAN_VERSION,
        "var_count": plan.var_count,
        "function": format_anf(anf_decompose(plan.function)),
        "affine": {"linear": list(mask_vars(plan.affine_mask)), "constant": plan.affine_constant},
        "root": step_to_dict(plan.root) if plan.root else None,
    }


def plan_from_dict(d: dict) -> DistillationPlan:
    if d.get("version") != PLAN_VERSION:
        raise PlanError(f"unsupported plan version {d.get('version')!r}")
    try:
        n = int(d["var_count"])
        f = from_anf(parse_expr(d["function"], n))
        affine = d["affine"]
        plan = DistillationPlan(
            f,
            monomial_mask(int(v) for v in affine["linear"]),
            int(affine["constant"]),
            step_from_dict(d["root"]) if d["root"] is not None else None,
        )
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, PlanError):
            raise
        raise PlanError(f"malformed plan: {e}") from e
    check_plan(plan)
    return plan


def dump_plan(plan: DistillationPlan) -> str:
    return json.dumps(plan_to_dict(plan), indent=2, sort_keys=True) + "\n"


def load_plan(text: str) -> DistillationPlan:
    try:
        return plan_from_dict(json.loads(text))
    except json.JSONDecodeError as e:
        raise PlanError(f"plan is not valid JSON: {e}") from e


def exact(v: Fraction | None) -> str:
    if v is None:
        return ""
    return f"{v.numerator}/{v.denominator}"


def decimal(v: Fraction | None, digits: int = 12) -> str:
    """Advisory rendering, correctly rounded to ``digits`` significant digits."""
    if v is None:
        return ""
    with localcontext() as ctx:
        ctx.prec = digits
        d = Decimal(v.numerator) / Decimal(v.denominator)
    return format(d, "g")


def trajectory_csv(traj: Trajectory) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in traj:
        w.writerow([row.round, exact(row.epsilon), exact(row.success_probability), exact(row.l1_to_target)])
    return buf.getvalue()


def trajectory_table(traj: Trajectory) -> str:
    lines = ["\t".join(CSV_COLUMNS)]
    for row in traj:
        lines.append("\t".join([str(row.round), decimal(row.epsilon), decimal(row.success_probability), decimal(row.l1_to_target)]))
    return "\n".join(lines) + "\n"
