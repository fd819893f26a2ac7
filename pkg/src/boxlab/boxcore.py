"""Exact n-port boxes: conditional distributions P(a|x) over binary ports.

Words are integers. Bit ``i`` (0-based) of a word belongs to port ``i + 1``;
this convention is used by every module in the package.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Callable, Iterator, Sequence

PORT_LIMIT = 8

ZERO = Fraction(0)
ONE = Fraction(1)


def bit(word: int, port: int) -> int:
    """Value of 1-based ``port`` in ``word``."""
    return (word >> (port - 1)) & 1


def parity(word: int) -> int:
    return bin(word).count("1") & 1


def word_from_bits(bits: Sequence[int]) -> int:
    """Inverse of :func:`bits_of`: ``bits[0]`` is port 1."""
    w = 0
    for i, b in enumerate(bits):
        w |= (b & 1) << i
    return w


def bits_of(word: int, width: int) -> tuple[int, ...]:
    return tuple((word >> i) & 1 for i in range(width))


@dataclass(frozen=True)
class Box:
    """Dense conditional table; ``table[x][a] = P(a|x)``."""

    port_count: int
    table: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        m = self.port_count
        if m < 1:
            raise ValueError("port_count must be positive")
        if m > PORT_LIMIT:
            raise ValueError(f"port_count {m} exceeds limit {PORT_LIMIT}")
        size = 1 << m
        if len(self.table) != size or any(len(row) != size for row in self.table):
            raise ValueError(f"table must be {size}x{size} for {m} ports")

    @classmethod
    def from_function(cls, port_count: int, prob: Callable[[int, int], Fraction]) -> "Box":
        """Build a box from ``prob(a, x)``."""
        size = 1 << port_count
        return cls(
            port_count,
            tuple(tuple(Fraction(prob(a, x)) for a in range(size)) for x in range(size)),
        )

    @classmethod
    def deterministic(cls, port_count: int, response: Callable[[int], int]) -> "Box":
        """Box that answers input word ``x`` with output word ``response(x)``."""
        return cls.from_function(port_count, lambda a, x: ONE if response(x) == a else ZERO)

    @property
    def size(self) -> int:
        return 1 << self.port_count

    def __call__(self, a: int, x: int) -> Fraction:
        return self.table[x][a]

    def support(self, x: int) -> Iterator[tuple[int, Fraction]]:
        for a, p in enumerate(self.table[x]):
            if p:
                yield a, p

    def marginal(self, ports: Sequence[int], x: int) -> dict[int, Fraction]:
        """Distribution of the outputs on ``ports`` (1-based) for input ``x``.

        Keys are words packed in the order given by ``ports``.
        """
        out: dict[int, Fraction] = {}
        for a, p in self.support(x):
            key = word_from_bits([bit(a, q) for q in ports])
            out[key] = out.get(key, ZERO) + p
        return out

    @cached_property
    def integer_form(self) -> tuple[int, tuple[tuple[tuple[int, int], ...], ...]]:
        """Common denominator ``D`` and per-input nonzero ``(a, numerator)`` lists.

        Composition multiplies these integers directly and normalizes once at
        the end, which keeps long distillation runs tractable.
        """
        den = 1
        for row in self.table:
            for p in row:
                if p:
                    den = math.lcm(den, p.denominator)
        rows = tuple(
            tuple((a, p.numerator * (den // p.denominator)) for a, p in enumerate(row) if p)
            for row in self.table
        )
        return den, rows

    def __repr__(self) -> str:
        return f"Box(port_count={self.port_count}, support={sum(1 for r in self.table for p in r if p)})"


@dataclass(frozen=True)
class PartyAssignment:
    """Which party owns each port. ``party_of[i]`` is the owner of port ``i + 1``."""

    party_of: tuple[int, ...]
    party_count: int

    def __post_init__(self):
        if self.party_count < 1:
            raise ValueError("party_count must be positive")
        for port, party in enumerate(self.party_of, start=1):
            if not 1 <= party <= self.party_count:
                raise ValueError(f"port {port} assigned to unknown party {party}")

    @classmethod
    def one_per_port(cls, m: int) -> "PartyAssignment":
        return cls(tuple(range(1, m + 1)), m)

    @classmethod
    def from_mapping(cls, mapping: dict[int, int], party_count: int | None = None) -> "PartyAssignment":
        ports = sorted(mapping)
        if ports != list(range(1, len(ports) + 1)):
            raise ValueError("assignment must cover ports 1..m")
        owners = tuple(mapping[p] for p in ports)
        return cls(owners, party_count if party_count is not None else max(owners))

    @property
    def port_count(self) -> int:
        return len(self.party_of)

    def owner(self, port: int) -> int:
        return self.party_of[port - 1]

    def ports_of(self, party: int) -> tuple[int, ...]:
        return tuple(p for p, q in enumerate(self.party_of, start=1) if q == party)


@dataclass(frozen=True)
class BoxViolation:
    kind: str  # "negative" or "row_sum"
    x: int
    a: int | None
    value: Fraction

    def __str__(self) -> str:
        if self.kind == "negative":
            return f"negative entry {self.value} at x={self.x:b}, a={self.a:b}"
        return f"row x={self.x:b} sums to {self.value}"


def validate_box(b: Box) -> BoxViolation | None:
    """First violated well-formedness constraint, or ``None`` if ``b`` is a distribution."""
    for x, row in enumerate(b.table):
        for a, p in enumerate(row):
            if p < 0:
                return BoxViolation("negative", x, a, p)
        total = sum(row, ZERO)
        if total != 1:
            return BoxViolation("row_sum", x, None, total)
    return None


@dataclass(frozen=True)
class SignalingWitness:
    ports: tuple[int, ...]
    x1: int
    x2: int
    marginal1: dict
    marginal2: dict


@dataclass(frozen=True)
class SignalingReport:
    non_signaling: bool
    witness: SignalingWitness | None = None

    def __bool__(self) -> bool:
        return self.non_signaling


def is_non_signaling(b: Box) -> SignalingReport:
    """Exact check that every strict subset's marginal ignores the other inputs."""
    m = b.port_count
    for size in range(1, m):
        for ports in combinations(range(1, m + 1), size):
            mask = word_from_bits([1 if p in ports else 0 for p in range(1, m + 1)])
            seen: dict[int, tuple[int, dict]] = {}
            for x in range(b.size):
                marg = b.marginal(ports, x)
                key = x & mask
                if key not in seen:
                    seen[key] = (x, marg)
                    continue
                x0, ref = seen[key]
                if _strip(ref) != _strip(marg):
                    return SignalingReport(False, SignalingWitness(ports, x0, x, ref, marg))
    return SignalingReport(True)


def _strip(d: dict) -> dict:
    return {k: v for k, v in d.items() if v}


def _same_shape(p: Box, q: Box) -> None:
    if p.port_count != q.port_count:
        raise ValueError(f"port count mismatch: {p.port_count} vs {q.port_count}")


def l1_distance(p: Box, q: Box) -> Fraction:
    """Unnormalized sum over all inputs and outputs of |p - q|."""
    _same_shape(p, q)
    return sum(
        (abs(u - v) for rp, rq in zip(p.table, q.table) for u, v in zip(rp, rq)),
        ZERO,
    )


def success_probability(b: Box, f) -> Fraction:
    """Probability, over uniform inputs, that the XOR of all outputs equals ``f(x)``."""
    if b.port_count != f.var_count:
        raise ValueError(f"box has {b.port_count} ports but f has {f.var_count} variables")
    hits = ZERO
    for x in range(b.size):
        target = f(x)
        hits += sum((p for a, p in b.support(x) if parity(a) == target), ZERO)
    return hits / b.size


def mix(p: Box, q: Box, eps) -> Box:
    """Exact convex combination ``eps * p + (1 - eps) * q``."""
    _same_shape(p, q)
    eps = Fraction(eps)
    if not 0 <= eps <= 1:
        raise ValueError(f"mixing weight {eps} outside [0, 1]")
    rest = 1 - eps
    return Box(
        p.port_count,
        tuple(
            tuple(eps * u + rest * v for u, v in zip(rp, rq))
            for rp, rq in zip(p.table, q.table)
        ),
    )
