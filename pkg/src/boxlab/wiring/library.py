"""Generators for the concrete wirings used by the distillation engine."""
from __future__ import annotations

from typing import Iterable, Mapping

from ..boolfn import (
    AnfForm,
    BooleanFunction,
    anf_decompose,
    mask_vars,
    monomial_mask,
    nonlocal_term_set,
)
from ..boxcore import Box, PartyAssignment, bit
from .core import Slot, Wiring, WiringError, apply_wiring
from .expr import Const, InputBit, Not, OutputBit, RandomBit, and_, xor


class IsolationError(WiringError):
    """The requested ANF term cannot be isolated by fixing inputs to 0."""


def _own(m: int) -> PartyAssignment:
    return PartyAssignment.one_per_port(m)


def identity_wiring(m: int) -> Wiring:
    return Wiring(
        m,
        (Slot(_own(m), tuple(InputBit(p) for p in range(1, m + 1))),),
        tuple(OutputBit(0, p) for p in range(1, m + 1)),
        name="identity",
    )


def bs_wiring(n: int) -> Wiring:
    """Two boxes; the second is fed ``x_i AND NOT a_i``; party ``i`` outputs ``a_i XOR b_i``."""
    if n < 2:
        raise ValueError("the BS wiring needs at least two parties")
    first = Slot(_own(n), tuple(InputBit(p) for p in range(1, n + 1)))
    second = Slot(_own(n), tuple(and_(InputBit(p), Not(OutputBit(0, p))) for p in range(1, n + 1)))
    outputs = tuple(xor(OutputBit(0, p), OutputBit(1, p)) for p in range(1, n + 1))
    return Wiring(n, (first, second), outputs, name=f"bs-{n}")


def recursive_pr_wiring(n: int) -> tuple[Wiring, tuple[int, ...]]:
    """Build an n-PR box from an (n-1)-PR box and n-1 bipartite PR boxes.

    Parties ``1..n-1`` feed their inputs to the big box and its outputs to the
    PR box they share with party ``n``; party ``n`` feeds ``x_n`` everywhere and
    outputs the XOR of its PR outputs.
    """
    if n < 3:
        raise ValueError("recursive construction starts at n = 3")
    big = Slot(
        PartyAssignment(tuple(range(1, n)), n),
        tuple(InputBit(p) for p in range(1, n)),
    )
    pairs = tuple(
        Slot(PartyAssignment((i, n), n), (OutputBit(0, i), InputBit(n)))
        for i in range(1, n)
    )
    outputs = tuple(OutputBit(i, 1) for i in range(1, n)) + (
        xor(*(OutputBit(i, 2) for i in range(1, n))),
    )
    w = Wiring(n, (big,) + pairs, outputs, name=f"recursive-pr-{n}")
    return w, w.shapes


def _as_mask(term) -> int:
    return term if isinstance(term, int) else monomial_mask(term)


def default_isolation_assignment(n: int, term) -> PartyAssignment:
    """Ports of the term get parties 1..|I| in order; every other port joins
    the party holding the nearest term port below it (or the first one)."""
    vars_ = mask_vars(_as_mask(term))
    party = {v: i for i, v in enumerate(vars_, start=1)}
    owners = []
    for port in range(1, n + 1):
        if port in party:
            owners.append(party[port])
        else:
            below = [v for v in vars_ if v < port]
            owners.append(party[below[-1]] if below else 1)
    return PartyAssignment(tuple(owners), len(vars_))


def isolation_blockers(anf: AnfForm, term) -> list[int]:
    """Nonlocal terms strictly contained in ``term``."""
    mask = _as_mask(term)
    return sorted(j for j in nonlocal_term_set(anf) if j != mask and j & mask == j)


def isolate_term(
    f: BooleanFunction, term, assignment: PartyAssignment | None = None
) -> tuple[Wiring, BooleanFunction]:
    """Wiring that extracts the PR-type box of one ANF term from ``P_f``.

    Inputs outside the term are fixed to 0, each party XORs all of its ports'
    outputs, and linear/constant terms that survive the restriction are
    cancelled by local flips.
    """
    n = f.var_count
    mask = _as_mask(term)
    anf = anf_decompose(f)
    if mask not in nonlocal_term_set(anf):
        raise IsolationError(f"{mask_vars(mask)} is not a nonlocal term of f")
    blockers = isolation_blockers(anf, mask)
    if blockers:
        raise IsolationError(
            f"term {mask_vars(mask)} contains nonlocal terms {[mask_vars(b) for b in blockers]}"
        )
    k = bin(mask).count("1")
    if assignment is None:
        assignment = default_isolation_assignment(n, mask)
    if assignment.port_count != n or assignment.party_count != k:
        raise IsolationError(f"assignment must map {n} ports onto {k} parties")
    for p in range(1, k + 1):
        held = [q for q in assignment.ports_of(p) if bit(mask, q)]
        if len(held) != 1:
            raise IsolationError(f"party {p} must hold exactly one port of the term, holds {held}")

    inputs = tuple(
        InputBit(assignment.owner(q)) if bit(mask, q) else Const(0) for q in range(1, n + 1)
    )
    survivors = {m for m in anf.monomials if m & mask == m and m != mask}
    outputs = []
    for p in range(1, k + 1):
        terms = [OutputBit(0, q) for q in assignment.ports_of(p)]
        (own,) = [q for q in assignment.ports_of(p) if bit(mask, q)]
        if (1 << (own - 1)) in survivors:
            terms.append(InputBit(p))
        out = xor(*terms)
        if p == 1 and 0 in survivors:
            out = Not(out)
        outputs.append(out)
    w = Wiring(k, (Slot(assignment, inputs),), tuple(outputs), name=f"isolate-{mask_vars(mask)}")
    return w, BooleanFunction.conjunction(k)


def augment_wiring(k: int, n: int, placement: Iterable[int] | None = None) -> Wiring:
    """Spread a k-party box over n parties; the others output shared random bits
    whose XOR the first placed party folds into its own output."""
    if k > n:
        raise ValueError(f"cannot augment {k} parties down to {n}")
    placed = tuple(placement) if placement is not None else tuple(range(1, k + 1))
    if len(placed) != k or len(set(placed)) != k or not all(1 <= p <= n for p in placed):
        raise ValueError(f"placement {placed} must name {k} distinct parties out of {n}")
    padding = [p for p in range(1, n + 1) if p not in placed]
    lead = placed[0]
    shared = tuple(frozenset((p, lead)) for p in padding)
    slot = Slot(PartyAssignment(placed, n), tuple(InputBit(p) for p in placed))
    outputs = []
    for p in range(1, n + 1):
        if p in padding:
            outputs.append(RandomBit(padding.index(p)))
        else:
            out = OutputBit(0, placed.index(p) + 1)
            if p == lead and padding:
                out = xor(out, *(RandomBit(i) for i in range(len(padding))))
            outputs.append(out)
    return Wiring(n, (slot,), tuple(outputs), shared, name=f"augment-{k}-{n}")


def augment_shared_randomness(b: Box, n: int, placement: Iterable[int] | None = None) -> Box:
    return apply_wiring(augment_wiring(b.port_count, n, placement), [b])


def xor_wiring(m: int, count: int = 2) -> Wiring:
    slots = tuple(Slot(_own(m), tuple(InputBit(p) for p in range(1, m + 1))) for _ in range(count))
    outputs = tuple(xor(*(OutputBit(s, p) for s in range(count))) for p in range(1, m + 1))
    return Wiring(m, slots, outputs, name=f"xor-{count}")


def xor_combine(p: Box, q: Box, *more: Box) -> Box:
    boxes = (p, q) + more
    if len({b.port_count for b in boxes}) != 1:
        raise WiringError("xor_combine needs boxes with equal port counts")
    return apply_wiring(xor_wiring(p.port_count, len(boxes)), boxes)


def affine_flip_wiring(n: int, mask: int, constant: int) -> Wiring:
    """Party ``i`` XORs its own input for every ``i`` in ``mask``; party 1 adds ``constant``."""
    outputs = []
    for p in range(1, n + 1):
        out = OutputBit(0, p)
        if bit(mask, p):
            out = xor(out, InputBit(p))
        if p == 1 and constant:
            out = Not(out)
        outputs.append(out)
    return Wiring(
        n,
        (Slot(_own(n), tuple(InputBit(p) for p in range(1, n + 1))),),
        tuple(outputs),
        name="affine-flip",
    )


def _discard_is_safe(b: Box, kept: list[int], dropped: list[int], fixes: Mapping[int, int]) -> bool:
    for x in range(b.size):
        if any(bit(x, q) != v for q, v in fixes.items()):
            continue
        joint = b.marginal(kept + dropped, x)
        left = b.marginal(kept, x)
        right = b.marginal(dropped, x)
        shift = len(kept)
        for u, pu in left.items():
            for v, pv in right.items():
                if joint.get(u | (v << shift), 0) != pu * pv:
                    return False
    return True


def fix_inputs_wiring(
    b: Box, fixes: Mapping[int, int], assignment: PartyAssignment | None = None
) -> Wiring:
    m = b.port_count
    for q, v in fixes.items():
        if not 1 <= q <= m or v not in (0, 1):
            raise WiringError(f"bad fix {q} := {v}")
    remaining = [q for q in range(1, m + 1) if q not in fixes]
    if not remaining:
        raise WiringError("cannot fix every input")
    if assignment is not None and assignment.port_count != m:
        raise WiringError("assignment does not match the box")
    party_of_port = {q: i for i, q in enumerate(remaining, start=1)}
    target: dict[int, int | None] = {}
    for q in fixes:
        target[q] = None
        if assignment is not None:
            same = [r for r in remaining if assignment.owner(r) == assignment.owner(q)]
            if same:
                target[q] = same[0]
    dropped = sorted(q for q, t in target.items() if t is None)
    if dropped and not _discard_is_safe(b, remaining, dropped, fixes):
        raise WiringError(f"outputs of ports {dropped} are correlated with the rest and have no owner")

    owners = tuple(
        party_of_port[q] if q in party_of_port else party_of_port[target[q]] if target[q] else 1
        for q in range(1, m + 1)
    )
    inputs = tuple(
        Const(fixes[q]) if q in fixes else InputBit(party_of_port[q]) for q in range(1, m + 1)
    )
    outputs = tuple(
        xor(OutputBit(0, r), *(OutputBit(0, q) for q in sorted(target) if target[q] == r))
        for r in remaining
    )
    return Wiring(len(remaining), (Slot(PartyAssignment(owners, len(remaining)), inputs),), outputs, name="fix-inputs")


def fix_inputs(b: Box, fixes: Mapping[int, int], assignment: PartyAssignment | None = None) -> Box:
    """Condition on fixed inputs; each fixed port's output is XORed into the
    lowest remaining port of the same owner, or dropped if provably independent."""
    if not fixes:
        return b
    return apply_wiring(fix_inputs_wiring(b, fixes, assignment), [b])
