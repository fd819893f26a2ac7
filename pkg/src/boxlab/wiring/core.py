"""Adaptive local wirings and their exact composition semantics."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..boxcore import Box, PartyAssignment
from .expr import Expr, InputBit, OutputBit, RandomBit, to_text


class WiringError(ValueError):
    """Shape mismatch or locality violation when composing boxes."""


@dataclass(frozen=True)
class Slot:
    """One box in a wiring: who holds each port and what each port is fed."""

    assignment: PartyAssignment
    inputs: tuple[Expr, ...]

    def __post_init__(self):
        if len(self.inputs) != self.assignment.port_count:
            raise WiringError("one input formula per port is required")

    @property
    def port_count(self) -> int:
        return self.assignment.port_count


@dataclass(frozen=True)
class Wiring:
    """Stages run in order; ``outputs[p - 1]`` is party ``p``'s final bit.

    ``shared[i]`` is the set of parties that see uniform random bit ``i``.
    """

    party_count: int
    slots: tuple[Slot, ...]
    outputs: tuple[Expr, ...]
    shared: tuple[frozenset[int], ...] = ()
    name: str = field(default="", compare=False)

    @property
    def shapes(self) -> tuple[int, ...]:
        return tuple(s.port_count for s in self.slots)


@dataclass(frozen=True)
class LocalityViolation:
    where: str
    party: int
    bit: str
    reason: str

    def __str__(self) -> str:
        return f"{self.where}: party {self.party} reads {self.bit} ({self.reason})"


def _check_formula(w: Wiring, e: Expr, party: int, stage: int, where: str) -> LocalityViolation | None:
    for leaf in e.leaves():
        if isinstance(leaf, InputBit):
            if leaf.party != party:
                return LocalityViolation(where, party, to_text(leaf), "another party's input")
        elif isinstance(leaf, OutputBit):
            if not 0 <= leaf.stage < stage:
                return LocalityViolation(where, party, to_text(leaf), "not from an earlier stage")
            slot = w.slots[leaf.stage]
            if not 1 <= leaf.port <= slot.port_count:
                return LocalityViolation(where, party, to_text(leaf), "no such port")
            if slot.assignment.owner(leaf.port) != party:
                return LocalityViolation(where, party, to_text(leaf), "port owned by another party")
        elif isinstance(leaf, RandomBit):
            if not 0 <= leaf.index < len(w.shared):
                return LocalityViolation(where, party, to_text(leaf), "undeclared randomness")
            if party not in w.shared[leaf.index]:
                return LocalityViolation(where, party, to_text(leaf), "randomness not visible")
        else:
            return LocalityViolation(where, party, repr(leaf), "unknown bit")
    return None


def check_locality(w: Wiring) -> LocalityViolation | None:
    """Locality, causality and slot usage; ``None`` when the wiring is sound."""
    if len(w.outputs) != w.party_count:
        return LocalityViolation("outputs", 0, "-", "one output formula per party is required")
    for s, slot in enumerate(w.slots):
        if slot.assignment.party_count != w.party_count:
            return LocalityViolation(f"stage {s}", 0, "-", "slot assignment has wrong party count")
        for port, e in enumerate(slot.inputs, start=1):
            v = _check_formula(w, e, slot.assignment.owner(port), s, f"stage {s} port {port}")
            if v:
                return v
    for p, e in enumerate(w.outputs, start=1):
        v = _check_formula(w, e, p, len(w.slots), f"output of party {p}")
        if v:
            return v
    read = set()
    for e in [*(i for slot in w.slots for i in slot.inputs), *w.outputs]:
        read.update(leaf.stage for leaf in e.leaves() if isinstance(leaf, OutputBit))
    for s in range(len(w.slots)):
        if s not in read:
            return LocalityViolation(f"stage {s}", 0, "-", "box slot is never read")
    return None


def apply_wiring(w: Wiring, boxes: Sequence[Box]) -> Box:
    """Exact box produced by running ``w`` on independent ``boxes``.

    Every global input, every shared-randomness value and every joint outcome
    with nonzero weight is enumerated; no sampling.
    """
    if len(boxes) != len(w.slots):
        raise WiringError(f"wiring has {len(w.slots)} slots, got {len(boxes)} boxes")
    for s, (slot, b) in enumerate(zip(w.slots, boxes)):
        if slot.port_count != b.port_count:
            raise WiringError(f"stage {s} expects {slot.port_count} ports, box has {b.port_count}")
    violation = check_locality(w)
    if violation:
        raise WiringError(str(violation))

    forms = [b.integer_form for b in boxes]
    denominator = 1 << len(w.shared)
    for den, _ in forms:
        denominator *= den
    rows = [rows for _, rows in forms]
    inputs = [slot.inputs for slot in w.slots]
    outputs = w.outputs
    stages = len(w.slots)
    size = 1 << w.party_count
    acc = [[0] * size for _ in range(size)]
    outs = [0] * stages

    def descend(x: int, r: int, s: int, weight: int, row_acc: list[int]) -> None:
        if s == stages:
            word = 0
            for p, e in enumerate(outputs):
                word |= e.evaluate(x, r, outs) << p
            row_acc[word] += weight
            return
        word = 0
        for port, e in enumerate(inputs[s]):
            word |= e.evaluate(x, r, outs) << port
        for a, num in rows[s][word]:
            outs[s] = a
            descend(x, r, s + 1, weight * num, row_acc)

    for x in range(size):
        for r in range(1 << len(w.shared)):
            descend(x, r, 0, 1, acc[x])

    cache: dict[int, Fraction] = {}

    def frac(n: int) -> Fraction:
        v = cache.get(n)
        if v is None:
            v = cache[n] = Fraction(n, denominator)
        return v

    return Box(w.party_count, tuple(tuple(frac(n) for n in row) for row in acc))
