"""XOR/AND/NOT circuits over the bits a party may read inside a wiring."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


class Expr:
    """Base class; supports ``^``, ``&`` and ``~`` for building circuits."""

    def __xor__(self, other: "Expr") -> "Expr":
        return xor(self, other)

    def __and__(self, other: "Expr") -> "Expr":
        return and_(self, other)

    def __invert__(self) -> "Expr":
        return Not(self)

    def leaves(self):
        yield self

    def evaluate(self, x: int, r: int, outs: Sequence[int]) -> int:
        raise NotImplementedError


@dataclass(frozen=True)
class Const(Expr):
    value: int

    def evaluate(self, x, r, outs):
        return self.value

    def leaves(self):
        return iter(())


@dataclass(frozen=True)
class InputBit(Expr):
    """Global input bit of a (1-based) party."""

    party: int

    def evaluate(self, x, r, outs):
        return (x >> (self.party - 1)) & 1


@dataclass(frozen=True)
class OutputBit(Expr):
    """Output of 1-based ``port`` of the box in 0-based ``stage``."""

    stage: int
    port: int

    def evaluate(self, x, r, outs):
        return (outs[self.stage] >> (self.port - 1)) & 1


@dataclass(frozen=True)
class RandomBit(Expr):
    index: int

    def evaluate(self, x, r, outs):
        return (r >> self.index) & 1


@dataclass(frozen=True)
class Not(Expr):
    arg: Expr

    def evaluate(self, x, r, outs):
        return 1 ^ self.arg.evaluate(x, r, outs)

    def leaves(self):
        return self.arg.leaves()


@dataclass(frozen=True)
class Xor(Expr):
    args: tuple[Expr, ...]

    def evaluate(self, x, r, outs):
        v = 0
        for a in self.args:
            v ^= a.evaluate(x, r, outs)
        return v

    def leaves(self):
        for a in self.args:
            yield from a.leaves()


@dataclass(frozen=True)
class And(Expr):
    args: tuple[Expr, ...]

    def evaluate(self, x, r, outs):
        for a in self.args:
            if not a.evaluate(x, r, outs):
                return 0
        return 1

    def leaves(self):
        for a in self.args:
            yield from a.leaves()


def xor(*args: Expr) -> Expr:
    flat: list[Expr] = []
    for a in args:
        flat.extend(a.args if isinstance(a, Xor) else (a,))
    if not flat:
        return Const(0)
    return flat[0] if len(flat) == 1 else Xor(tuple(flat))


def and_(*args: Expr) -> Expr:
    flat: list[Expr] = []
    for a in args:
        flat.extend(a.args if isinstance(a, And) else (a,))
    if not flat:
        return Const(1)
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def to_text(e: Expr) -> str:
    """Compact rendering used in plan/wiring dumps."""
    if isinstance(e, Const):
        return str(e.value)
    if isinstance(e, InputBit):
        return f"x{e.party}"
    if isinstance(e, OutputBit):
        return f"o{e.stage}.{e.port}"
    if isinstance(e, RandomBit):
        return f"r{e.index}"
    if isinstance(e, Not):
        return f"!{to_text(e.arg)}"
    if isinstance(e, Xor):
        return "(" + " ^ ".join(to_text(a) for a in e.args) + ")"
    if isinstance(e, And):
        return "(" + " & ".join(to_text(a) for a in e.args) + ")"
    raise TypeError(f"not an expression: {e!r}")
