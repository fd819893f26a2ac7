"""Distillation engine: BS iteration, planning over the ANF, plan execution."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .boolfn import (
    AnfForm,
    BooleanFunction,
    affine_part,
    anf_decompose,
    from_anf,
    mask_vars,
    monomial_mask,
    nonlocal_term_set,
    term_key,
)
from .boxcore import Box, PartyAssignment, l1_distance, mix, parity, success_probability
from .boxlib import correlated_noise_box, full_correlation_box, noisy_box
from .wiring import (
    affine_flip_wiring,
    apply_wiring,
    augment_shared_randomness,
    bs_wiring,
    fix_inputs,
    isolate_term,
    isolation_blockers,
    recursive_pr_wiring,
    xor_combine,
)

EXACT_ROUND_BUDGET = 24
ROUND_BUDGET = 10_000


class FamilyError(ValueError):
    """Box is not of the form ``eps * P_f + (1 - eps) * P^c``."""


class BudgetError(ValueError):
    pass


class PlanError(ValueError):
    pass


@dataclass(frozen=True)
class NoisyFamily:
    target: BooleanFunction
    epsilon: Fraction

    def __post_init__(self):
        if not 0 <= self.epsilon <= 1:
            raise ValueError(f"epsilon {self.epsilon} outside [0, 1]")

    @property
    def box(self) -> Box:
        return noisy_box(self.target, self.epsilon)


def epsilon_of(b: Box, f: BooleanFunction) -> Fraction:
    """Recover ``eps`` from ``b = eps * P_f + (1 - eps) * P^c``, checking every entry."""
    if b.port_count != f.var_count:
        raise FamilyError("box and function sizes differ")
    witness = next((x for x in range(b.size) if f(x)), None)
    if witness is None:
        raise FamilyError("P_f equals P^c for f = 0; epsilon is not identifiable")
    weight = Fraction(1, 1 << (f.var_count - 1))
    eps = b.table[witness][1] / weight  # a = 0...01 has odd parity
    if not 0 <= eps <= 1:
        raise FamilyError(f"entry at x={witness:b}, a=1 gives epsilon {eps}")
    for x in range(b.size):
        fx = f(x)
        for a in range(b.size):
            par = parity(a)
            expected = eps * weight * (par == fx) + (1 - eps) * weight * (par == 0)
            if b.table[x][a] != expected:
                raise FamilyError(
                    f"entry x={x:b}, a={a:b} is {b.table[x][a]}, family with epsilon {eps} needs {expected}"
                )
    return eps


def _degrade(eps: Fraction, bits: int | None) -> Fraction:
    if bits is None:
        return eps
    return Fraction((eps.numerator << bits) // eps.denominator, 1 << bits)


def degrade(family: NoisyFamily, epsilon) -> NoisyFamily:
    """Lower epsilon by locally replacing the box with ``P^c`` with shared probability."""
    epsilon = Fraction(epsilon)
    if not 0 <= epsilon <= family.epsilon:
        raise ValueError("can only lower epsilon")
    if epsilon == family.epsilon:
        return family
    n = family.target.var_count
    out = mix(family.box, correlated_noise_box(n), epsilon / family.epsilon)
    return NoisyFamily(family.target, epsilon_of(out, family.target))


def _check_and(f: BooleanFunction) -> None:
    if f != BooleanFunction.conjunction(f.var_count) or f.var_count < 2:
        raise FamilyError("BS iteration distills AND-type boxes on at least two parties")


def bs_step(family: NoisyFamily, precision_bits: int | None = None) -> NoisyFamily:
    """One BS round on two i.i.d. copies.

    With ``precision_bits`` the new epsilon is afterwards lowered to a dyadic
    value of that precision (a local operation), which bounds number growth.
    """
    f = family.target
    _check_and(f)
    b = family.box
    out = apply_wiring(bs_wiring(f.var_count), [b, b])
    new = NoisyFamily(f, epsilon_of(out, f))
    if precision_bits is not None:
        new = degrade(new, _degrade(new.epsilon, precision_bits))
    return new


def bs_map(eps: Fraction, n: int) -> Fraction:
    """Closed form of one BS round on ``n`` parties."""
    return eps + eps * (1 - eps) / (1 << (n - 1))


_iteration_cache: dict[tuple, list[NoisyFamily]] = {}


def iterate_bs(family: NoisyFamily, rounds: int, precision_bits: int | None = None) -> list[NoisyFamily]:
    """Families after rounds ``0..rounds``; shared across calls."""
    limit = EXACT_ROUND_BUDGET if precision_bits is None else ROUND_BUDGET
    if not 0 <= rounds <= limit:
        raise BudgetError(f"{rounds} rounds outside budget 0..{limit}")
    key = (family, precision_bits)
    seq = _iteration_cache.setdefault(key, [family])
    while len(seq) <= rounds:
        seq.append(bs_step(seq[-1], precision_bits))
    return seq[: rounds + 1]


@dataclass(frozen=True)
class TrajectoryRow:
    round: int
    epsilon: Fraction | None
    success_probability: Fraction
    l1_to_target: Fraction


@dataclass
class Trajectory:
    rows: list[TrajectoryRow] = field(default_factory=list)

    def __iter__(self) -> Iterator[TrajectoryRow]:
        return iter(self.rows)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def epsilons(self) -> list[Fraction | None]:
        return [r.epsilon for r in self.rows]


def distill_trajectory(family: NoisyFamily, rounds: int, precision_bits: int | None = None) -> Trajectory:
    target = full_correlation_box(family.target)
    traj = Trajectory()
    for t, fam in enumerate(iterate_bs(family, rounds, precision_bits)):
        b = fam.box
        traj.rows.append(
            TrajectoryRow(t, fam.epsilon, success_probability(b, fam.target), l1_distance(b, target))
        )
    return traj


# -- planning ---------------------------------------------------------------

SOURCE = "Source"
ISOLATE = "IsolateTerm"
BS_ITERATE = "BsIterate"
FIX_TO_ONE = "FixInputsToOne"
CONSTRUCT = "RecursiveConstruct"
AUGMENT = "Augment"
XOR_COMBINE = "XorCombine"

STEP_TYPES = (SOURCE, ISOLATE, BS_ITERATE, FIX_TO_ONE, CONSTRUCT, AUGMENT, XOR_COMBINE)


@dataclass
class Step:
    type: str
    term: tuple[int, ...] = ()
    fixes: dict[int, int] = field(default_factory=dict)
    rounds: int | None = None
    children: list["Step"] = field(default_factory=list)

    def walk(self) -> Iterator["Step"]:
        yield self
        for c in self.children:
            yield from c.walk()


@dataclass
class DistillationPlan:
    function: BooleanFunction
    affine_mask: int
    affine_constant: int
    root: Step | None

    @property
    def var_count(self) -> int:
        return self.function.var_count

    def branches(self) -> list[Step]:
        return list(self.root.children) if self.root else []


def _isolated_unit(n: int, term: int) -> Step:
    fixes = {q: 0 for q in range(1, n + 1) if not (term >> (q - 1)) & 1}
    return Step(BS_ITERATE, mask_vars(term), children=[Step(ISOLATE, mask_vars(term), fixes, children=[Step(SOURCE)])])


def _reduced_unit(n: int, source_term: int, size: int) -> Step:
    """Distill ``source_term`` and fix its surplus inputs to 1 down to ``size`` ports."""
    k = bin(source_term).count("1")
    fixes = {q: 1 for q in range(size + 1, k + 1)}
    return Step(FIX_TO_ONE, mask_vars(source_term)[:size], fixes, children=[_isolated_unit(n, source_term)])


def make_plan(f: BooleanFunction) -> DistillationPlan:
    """Deterministic plan covering every nonlocal ANF term by one branch."""
    n = f.var_count
    anf = anf_decompose(f)
    aff = affine_part(anf)
    mask = 0
    for m in aff.monomials:
        mask |= m
    constant = 1 if 0 in aff.monomials else 0
    terms = sorted(nonlocal_term_set(anf), key=term_key)
    if not terms:
        return DistillationPlan(f, mask, constant, None)
    isolable = [t for t in terms if not isolation_blockers(anf, t)]
    if not isolable:
        raise PlanError("no isolable term; minimal terms should always be isolable")

    def size(t: int) -> int:
        return bin(t).count("1")

    def pr_unit() -> Step:
        pairs = [t for t in isolable if size(t) == 2]
        if pairs:
            return _isolated_unit(n, pairs[0])
        smallest = min(isolable, key=lambda t: (size(t), mask_vars(t)))
        return _reduced_unit(n, smallest, 2)

    branches = []
    for t in terms:
        k = size(t)
        if t in isolable:
            unit = _isolated_unit(n, t)
        else:
            bigger = [s for s in isolable if size(s) >= k]
            if bigger:
                src = min(bigger, key=lambda s: (size(s), mask_vars(s)))
                unit = _reduced_unit(n, src, k)
            else:
                base = isolable[0]  # largest, then lexicographic
                unit = Step(CONSTRUCT, mask_vars(t), children=[_isolated_unit(n, base), pr_unit()])
        branches.append(Step(AUGMENT, mask_vars(t), children=[unit]))
    return DistillationPlan(f, mask, constant, Step(XOR_COMBINE, children=branches))


def nonlocal_part(f: BooleanFunction) -> BooleanFunction:
    anf = anf_decompose(f)
    return from_anf(AnfForm(f.var_count, nonlocal_term_set(anf)))


def step_ports(step: Step, n: int) -> int:
    """Port count of the box a step produces; raises PlanError on shape errors."""
    t = step.type
    if t == SOURCE:
        if step.children:
            raise PlanError("source steps are leaves")
        return n
    if t == XOR_COMBINE:
        shapes = {step_ports(c, n) for c in step.children}
        if shapes != {n}:
            raise PlanError(f"XorCombine children must all have {n} ports, got {shapes}")
        return n
    if len(step.children) != (2 if t == CONSTRUCT else 1):
        raise PlanError(f"{t} has {len(step.children)} children")
    child = [step_ports(c, n) for c in step.children]
    k = len(step.term)
    if t == ISOLATE:
        if child[0] != n:
            raise PlanError("IsolateTerm must read the source box")
        return k
    if t == BS_ITERATE:
        if child[0] != k:
            raise PlanError(f"BsIterate over {k} parties fed a {child[0]}-port box")
        return k
    if t == FIX_TO_ONE:
        if child[0] - len(step.fixes) != k:
            raise PlanError("FixInputsToOne leaves the wrong number of ports")
        return k
    if t == CONSTRUCT:
        if child[1] != 2 or not 2 <= child[0] < k:
            raise PlanError("RecursiveConstruct needs a smaller PR-type box and a bipartite PR box")
        return k
    if t == AUGMENT:
        if child[0] != k:
            raise PlanError("Augment term does not match its child")
        return n
    raise PlanError(f"unknown step type {t!r}")


def check_plan(plan: DistillationPlan) -> None:
    """Type-check ports and verify the branch/term coverage invariants."""
    n = plan.var_count
    nl = nonlocal_term_set(anf_decompose(plan.function))
    if plan.root is None:
        if nl:
            raise PlanError("empty plan for a non-affine function")
        return
    step_ports(plan.root, n)
    covered = [monomial_mask(b.term) for b in plan.branches()]
    if sorted(covered) != sorted(nl):
        raise PlanError("branches do not cover the nonlocal terms exactly once")
    anf = anf_decompose(nonlocal_part(plan.function))
    for s in plan.root.walk():
        if s.type == ISOLATE and isolation_blockers(anf, monomial_mask(s.term)):
            raise PlanError(f"term {s.term} is not isolable")


@dataclass
class ExecutionReport:
    trajectories: dict[str, Trajectory]
    final_distance: Fraction
    success_probability: Fraction


def source_box(f: BooleanFunction, eps) -> Box:
    """Noisy source: ``eps * P_f`` plus ``(1 - eps)`` of the local full-correlation
    box with the same affine part as ``f`` (``P^c`` when there is none)."""
    local = from_anf(affine_part(anf_decompose(f)))
    return mix(full_correlation_box(f), full_correlation_box(local), Fraction(eps))


def execute_plan(
    plan: DistillationPlan,
    eps0,
    rounds_per_unit: int,
    precision_bits: int | None = None,
) -> tuple[Box, ExecutionReport]:
    """Run the plan bottom-up with exact box arithmetic."""
    f = plan.function
    n = f.var_count
    target = full_correlation_box(f)
    check_plan(plan)
    if plan.root is None:
        return target, ExecutionReport({}, Fraction(0), success_probability(target, f))

    eps0 = Fraction(eps0)
    core = nonlocal_part(f)
    stripped = apply_wiring(affine_flip_wiring(n, plan.affine_mask, plan.affine_constant), [source_box(f, eps0)])
    trajectories: dict[str, Trajectory] = {}

    def run(step: Step, label: str) -> Box:
        kids = [run(c, f"{label}/{i}") for i, c in enumerate(step.children)]
        t = step.type
        if t == SOURCE:
            return stripped
        if t == ISOLATE:
            w, _ = isolate_term(core, step.term)
            return apply_wiring(w, kids)
        if t == BS_ITERATE:
            k = len(step.term)
            conj = BooleanFunction.conjunction(k)
            fam = NoisyFamily(conj, epsilon_of(kids[0], conj))
            rounds = step.rounds if step.rounds is not None else rounds_per_unit
            trajectories[f"{label}:{''.join(map(str, step.term))}"] = distill_trajectory(fam, rounds, precision_bits)
            return iterate_bs(fam, rounds, precision_bits)[-1].box
        if t == FIX_TO_ONE:
            k = kids[0].port_count
            keep = k - len(step.fixes)
            owners = tuple(min(q, keep) for q in range(1, k + 1))
            return fix_inputs(kids[0], step.fixes, PartyAssignment(owners, keep))
        if t == CONSTRUCT:
            box, pr = kids
            for j in range(box.port_count + 1, len(step.term) + 1):
                w, _ = recursive_pr_wiring(j)
                box = apply_wiring(w, [box] + [pr] * (j - 1))
            return box
        if t == AUGMENT:
            return augment_shared_randomness(kids[0], n, step.term)
        if t == XOR_COMBINE:
            return kids[0] if len(kids) == 1 else xor_combine(*kids)
        raise PlanError(f"unknown step type {t!r}")

    combined = run(plan.root, "root")
    out = apply_wiring(affine_flip_wiring(n, plan.affine_mask, plan.affine_constant), [combined])
    return out, ExecutionReport(trajectories, l1_distance(out, target), success_probability(out, f))


def plan_trajectory(
    plan: DistillationPlan, eps0, rounds: int, precision_bits: int | None = None
) -> Trajectory:
    """Final box quality as a function of ``rounds_per_unit = 0..rounds``."""
    f = plan.function
    traj = Trajectory()
    for r in range(rounds + 1):
        out, report = execute_plan(plan, eps0, r, precision_bits)
        try:
            eps = epsilon_of(out, f)
        except FamilyError:
            eps = None
        traj.rows.append(TrajectoryRow(r, eps, report.success_probability, report.final_distance))
    return traj


def rounds_needed(plan: DistillationPlan, eps0, tolerance, precision_bits: int | None = None, limit: int = 200) -> int:
    """Smallest ``rounds_per_unit`` with final L1 distance at most ``tolerance``."""
    tolerance = Fraction(tolerance)
    for r in range(limit + 1):
        _, report = execute_plan(plan, eps0, r, precision_bits)
        if report.final_distance <= tolerance:
            return r
    raise BudgetError(f"tolerance {tolerance} not reached within {limit} rounds")
