"""Boolean functions, algebraic normal form and affine approximation.

Monomials are bitmasks over the word encoding: bit ``i`` set means variable
``x_{i+1}`` occurs. The empty mask is the constant term.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

MAX_ARITY = 16


@dataclass(frozen=True)
class BooleanFunction:
    var_count: int
    truth_table: tuple[int, ...]

    def __post_init__(self):
        if not 1 <= self.var_count <= MAX_ARITY:
            raise ValueError(f"arity {self.var_count} outside 1..{MAX_ARITY}")
        if len(self.truth_table) != 1 << self.var_count:
            raise ValueError("truth table length must be 2**var_count")
        if any(v not in (0, 1) for v in self.truth_table):
            raise ValueError("truth table entries must be 0 or 1")

    @classmethod
    def from_callable(cls, n: int, fn: Callable[[int], int]) -> "BooleanFunction":
        return cls(n, tuple(int(fn(x)) & 1 for x in range(1 << n)))

    @classmethod
    def from_index(cls, n: int, index: int) -> "BooleanFunction":
        """The function whose truth table is the binary expansion of ``index``."""
        return cls(n, tuple((index >> x) & 1 for x in range(1 << n)))

    @classmethod
    def conjunction(cls, n: int, variables: Iterable[int] | None = None) -> "BooleanFunction":
        """AND of the given 1-based variables (all of them by default)."""
        vars_ = range(1, n + 1) if variables is None else variables
        mask = monomial_mask(vars_)
        return cls.from_callable(n, lambda x: (x & mask) == mask)

    @classmethod
    def constant(cls, n: int, value: int = 0) -> "BooleanFunction":
        return cls(n, (value & 1,) * (1 << n))

    def __call__(self, x: int) -> int:
        return self.truth_table[x]

    def __xor__(self, other: "BooleanFunction") -> "BooleanFunction":
        if other.var_count != self.var_count:
            raise ValueError("arity mismatch")
        return BooleanFunction(self.var_count, tuple(u ^ v for u, v in zip(self.truth_table, other.truth_table)))

    @property
    def index(self) -> int:
        return sum(v << x for x, v in enumerate(self.truth_table))


def monomial_mask(variables: Iterable[int]) -> int:
    m = 0
    for v in variables:
        m |= 1 << (v - 1)
    return m


def mask_vars(mask: int) -> tuple[int, ...]:
    """1-based variables in ``mask``, ascending."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def term_key(mask: int) -> tuple[int, tuple[int, ...]]:
    """Planner order: larger terms first, then lexicographic on variable lists."""
    vs = mask_vars(mask)
    return (-len(vs), vs)


@dataclass(frozen=True)
class AnfForm:
    var_count: int
    monomials: frozenset[int]

    def __post_init__(self):
        limit = 1 << self.var_count
        for m in self.monomials:
            if not 0 <= m < limit:
                raise ValueError(f"monomial {m:b} uses a variable beyond x{self.var_count}")

    @classmethod
    def from_terms(cls, n: int, terms: Iterable[Iterable[int]]) -> "AnfForm":
        """Terms given as collections of 1-based variables; repeats cancel."""
        mons: set[int] = set()
        for t in terms:
            mons ^= {monomial_mask(t)}
        return cls(n, frozenset(mons))

    def terms(self) -> list[tuple[int, ...]]:
        return sorted((mask_vars(m) for m in self.monomials), key=lambda t: (len(t), t))

    def __str__(self) -> str:
        return format_anf(self)


def format_anf(a: AnfForm) -> str:
    if not a.monomials:
        return "0"
    parts = []
    for t in sorted((mask_vars(m) for m in a.monomials), key=lambda t: (-len(t), t)):
        parts.append("*".join(f"x{v}" for v in t) if t else "1")
    return " + ".join(parts)


def _moebius(values: list[int], n: int) -> list[int]:
    v = list(values)
    step = 1
    for _ in range(n):
        for i in range(len(v)):
            if i & step:
                v[i] ^= v[i ^ step]
        step <<= 1
    return v


def anf_decompose(f: BooleanFunction) -> AnfForm:
    coeffs = _moebius(list(f.truth_table), f.var_count)
    return AnfForm(f.var_count, frozenset(m for m, c in enumerate(coeffs) if c))


def from_anf(a: AnfForm) -> BooleanFunction:
    # the binary Moebius transform is its own inverse
    coeffs = [0] * (1 << a.var_count)
    for m in a.monomials:
        coeffs[m] = 1
    return BooleanFunction(a.var_count, tuple(_moebius(coeffs, a.var_count)))


def nonlocal_term_set(a: AnfForm) -> frozenset[int]:
    return frozenset(m for m in a.monomials if bin(m).count("1") >= 2)


def affine_part(a: AnfForm) -> AnfForm:
    return AnfForm(a.var_count, frozenset(m for m in a.monomials if bin(m).count("1") <= 1))


@dataclass(frozen=True)
class EmptyOverlapPartition:
    blocks: tuple[frozenset[int], ...]

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    def block_variables(self, i: int) -> int:
        mask = 0
        for t in self.blocks[i]:
            mask |= t
        return mask


def empty_overlap_partition(terms: Iterable[int]) -> EmptyOverlapPartition:
    """Connected components of the share-a-variable graph on ``terms``."""
    remaining = set(terms)
    blocks = []
    while remaining:
        seed = min(remaining, key=term_key)
        block = {seed}
        support = seed
        grown = True
        while grown:
            grown = False
            for t in list(remaining - block):
                if t & support:
                    block.add(t)
                    support |= t
                    grown = True
        remaining -= block
        blocks.append(frozenset(block))
    return EmptyOverlapPartition(tuple(blocks))


def dependent_variable_count(f: BooleanFunction) -> int:
    support = 0
    for m in anf_decompose(f).monomials:
        support |= m
    return bin(support).count("1")


def nonlocal_variable_count(f: BooleanFunction) -> int:
    """Variables that occur in some term of degree at least two."""
    support = 0
    for m in nonlocal_term_set(anf_decompose(f)):
        support |= m
    return bin(support).count("1")


def walsh_spectrum(f: BooleanFunction) -> list[int]:
    """``W(u) = sum_x (-1)^(f(x) xor u.x)`` by the in-place butterfly."""
    w = [1 - 2 * v for v in f.truth_table]
    h = 1
    while h < len(w):
        for i in range(0, len(w), 2 * h):
            for j in range(i, i + h):
                a, b = w[j], w[j + h]
                w[j], w[j + h] = a + b, a - b
        h *= 2
    return w


def walsh_spectrum_naive(f: BooleanFunction) -> list[int]:
    size = 1 << f.var_count
    return [
        sum(1 - 2 * (f(x) ^ (bin(u & x).count("1") & 1)) for x in range(size))
        for u in range(size)
    ]


def affine_function(n: int, mask: int, constant: int) -> BooleanFunction:
    return BooleanFunction.from_callable(n, lambda x: constant ^ (bin(mask & x).count("1") & 1))


@dataclass(frozen=True)
class AffineApproximation:
    mask: int
    constant: int
    distance: int
    function: BooleanFunction


def best_affine_approx(f: BooleanFunction) -> AffineApproximation:
    """Closest affine function in Hamming distance.

    Ties go to the smallest mask, then to constant 0.
    """
    spectrum = walsh_spectrum(f)
    best = max(abs(w) for w in spectrum)
    u = next(i for i, w in enumerate(spectrum) if abs(w) == best)
    constant = 0 if spectrum[u] > 0 else 1
    distance = ((1 << f.var_count) - best) // 2
    return AffineApproximation(u, constant, distance, affine_function(f.var_count, u, constant))
