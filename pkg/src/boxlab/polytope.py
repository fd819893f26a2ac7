"""Local-polytope membership, distance to it, and extremality in the
non-signaling polytope. All answers are exact."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from . import simplex
from .boolfn import (
    AnfForm,
    BooleanFunction,
    from_anf,
    anf_decompose,
    empty_overlap_partition,
    mask_vars,
    nonlocal_term_set,
    nonlocal_variable_count,
)
from .boxcore import Box, PartyAssignment, ZERO, bit, bits_of, is_non_signaling, mix, parity, word_from_bits

ORACLE_PORT_LIMIT = 4


class OracleSizeError(ValueError):
    pass


def _check_size(b: Box) -> None:
    if b.port_count > ORACLE_PORT_LIMIT:
        raise OracleSizeError(f"{b.port_count} ports exceeds the oracle limit of {ORACLE_PORT_LIMIT}")


@dataclass(frozen=True)
class DeterministicStrategy:
    """``responses[p - 1][u]`` is party ``p``'s output word for its input word ``u``
    (words over the party's own ports, in ascending port order)."""

    assignment: PartyAssignment
    responses: tuple[tuple[int, ...], ...]

    def __call__(self, x: int) -> int:
        a = 0
        for p, table in enumerate(self.responses, start=1):
            ports = self.assignment.ports_of(p)
            if not ports:
                continue
            u = word_from_bits([bit(x, q) for q in ports])
            v = table[u]
            for i, q in enumerate(ports):
                a |= ((v >> i) & 1) << (q - 1)
        return a

    def box(self) -> Box:
        return Box.deterministic(self.assignment.port_count, self)


def deterministic_strategies(assignment: PartyAssignment) -> list[DeterministicStrategy]:
    per_party = []
    for p in range(1, assignment.party_count + 1):
        k = len(assignment.ports_of(p))
        per_party.append(list(product(range(1 << k), repeat=1 << k)))
    return [DeterministicStrategy(assignment, tuple(choice)) for choice in product(*per_party)]


@dataclass(frozen=True)
class BellInequality:
    """``sum coefficients[x][a] * P(a|x) <= bound`` holds for every local box."""

    coefficients: tuple[tuple[Fraction, ...], ...]
    bound: Fraction

    def value(self, b: Box) -> Fraction:
        return sum((c * p for cr, pr in zip(self.coefficients, b.table) for c, p in zip(cr, pr)), ZERO)


@dataclass(frozen=True)
class LocalityResult:
    local: bool
    weights: dict[DeterministicStrategy, Fraction] | None = None
    certificate: BellInequality | None = None

    def __bool__(self) -> bool:
        return self.local


def _membership_rows(b: Box, strategies):
    responses = [[s(x) for x in range(b.size)] for s in strategies]
    rows = []
    rhs = []
    for x in range(b.size):
        for a in range(b.size):
            rows.append({j: 1 for j, resp in enumerate(responses) if resp[x] == a})
            rhs.append(b.table[x][a])
    return rows, rhs


def is_local(b: Box, assignment: PartyAssignment | None = None) -> LocalityResult:
    """Exact LP feasibility over deterministic strategies.

    Returns the mixture when feasible, otherwise a Bell-type inequality
    (from the phase-one dual) that ``b`` violates.
    """
    _check_size(b)
    assignment = assignment or PartyAssignment.one_per_port(b.port_count)
    strategies = deterministic_strategies(assignment)
    rows, rhs = _membership_rows(b, strategies)
    res = simplex.solve({}, rows, rhs, len(strategies))
    if res.status == "optimal":
        weights = {s: w for s, w in zip(strategies, res.x) if w}
        return LocalityResult(True, weights=weights)
    y = res.farkas
    coeffs = tuple(tuple(y[x * b.size + a] for a in range(b.size)) for x in range(b.size))
    return LocalityResult(False, certificate=BellInequality(coeffs, ZERO))


def l1_distance_to_local(b: Box, assignment: PartyAssignment | None = None) -> Fraction:
    """Minimum L1 distance from ``b`` to a mixture of deterministic strategies."""
    _check_size(b)
    assignment = assignment or PartyAssignment.one_per_port(b.port_count)
    strategies = deterministic_strategies(assignment)
    rows, rhs = _membership_rows(b, strategies)
    ns = len(strategies)
    ne = len(rows)
    for e, row in enumerate(rows):
        row[ns + e] = 1
        row[ns + ne + e] = -1
    rows.append({j: 1 for j in range(ns)})
    rhs.append(Fraction(1))
    cost = {j: 1 for j in range(ns, ns + 2 * ne)}
    res = simplex.solve(cost, rows, rhs, ns + 2 * ne)
    assert res.status == "optimal"
    return res.objective


def _rank(rows: list[dict[int, Fraction]]) -> int:
    pivots: dict[int, dict[int, Fraction]] = {}
    for row in rows:
        row = {k: Fraction(v) for k, v in row.items() if v}
        while row:
            col = min(row)
            if col not in pivots:
                piv = row[col]
                pivots[col] = {k: v / piv for k, v in row.items()}
                break
            f = row[col]
            for k, v in pivots[col].items():
                nv = row.get(k, ZERO) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
    return len(pivots)


def vertex_defect(b: Box) -> int:
    """Dimension of the space of feasible directions that keep every tight
    positivity constraint; zero exactly at vertices."""
    _check_size(b)
    m = b.port_count
    size = b.size
    index = {}
    for x in range(size):
        for a in range(size):
            if b.table[x][a]:
                index[(x, a)] = len(index)
    rows = []
    for x in range(size):
        rows.append({index[(x, a)]: 1 for a in range(size) if (x, a) in index})
    # marginal on all ports but q must not depend on x_q
    for q in range(1, m + 1):
        flip = 1 << (q - 1)
        for x in range(size):
            if x & flip:
                continue
            for rest in range(size):
                if rest & flip:
                    continue
                row: dict[int, Fraction] = {}
                for aq in (0, flip):
                    a = rest | aq
                    if (x, a) in index:
                        row[index[(x, a)]] = row.get(index[(x, a)], 0) + 1
                    if (x | flip, a) in index:
                        row[index[(x | flip, a)]] = row.get(index[(x | flip, a)], 0) - 1
                if any(row.values()):
                    rows.append(row)
    return len(index) - _rank(rows)


def is_vertex(b: Box) -> bool:
    _check_size(b)
    if not is_non_signaling(b):
        raise ValueError("is_vertex requires a non-signaling box")
    return vertex_defect(b) == 0


def classify_fc_extremal(f: BooleanFunction) -> bool:
    """One block of nonlocal terms, and those terms cover every variable."""
    terms = nonlocal_term_set(anf_decompose(f))
    return (
        empty_overlap_partition(terms).block_count == 1
        and nonlocal_variable_count(f) == f.var_count
    )


@dataclass(frozen=True)
class ConvexSplit:
    p1: Box
    p2: Box
    weight: Fraction

    def combine(self) -> Box:
        return mix(self.p1, self.p2, self.weight)


class ExtremalError(ValueError):
    pass


def _parity_box(n: int, left: int, g1, g2) -> Box:
    """Uniform over ``a`` with parity on ``left`` ports = g1(x) and on the rest = g2(x)."""
    right = ((1 << n) - 1) & ~left
    w = Fraction(1, 1 << (n - 2))
    return Box.from_function(
        n, lambda a, x: w if parity(a & left) == g1(x) and parity(a & right) == g2(x) else ZERO
    )


def separable_split(f: BooleanFunction) -> tuple[int, BooleanFunction, BooleanFunction] | None:
    """A port set ``V`` with ``f = g(x_V) xor h(x_rest)``, both sides nonempty."""
    n = f.var_count
    if n < 2:
        return None
    anf = anf_decompose(f)
    terms = nonlocal_term_set(anf)
    part = empty_overlap_partition(terms)
    covered = 0
    for t in terms:
        covered |= t
    full = (1 << n) - 1
    if part.block_count >= 2:
        left = part.block_variables(0)
    elif covered != full:
        left = covered or 1
    else:
        return None
    mons_left = frozenset(m for m in anf.monomials if m and m & left == m)
    mons_right = anf.monomials - mons_left
    g = from_anf(AnfForm(n, mons_left))
    h = from_anf(AnfForm(n, frozenset(mons_right)))
    return left, g, h


def nonextremal_split(f: BooleanFunction) -> ConvexSplit:
    """Explicit half-half decomposition of a non-extremal full-correlation box.

    Ports are split into two groups such that ``f`` separates across them; one
    half fixes the two group parities to the two parts of ``f``, the other to
    their negations.
    """
    found = separable_split(f)
    if found is None:
        raise ExtremalError(f"no separable split exists for f with ANF {mask_repr(f)}")
    left, g, h = found
    n = f.var_count
    p1 = _parity_box(n, left, g, h)
    p2 = _parity_box(n, left, lambda x: 1 ^ g(x), lambda x: 1 ^ h(x))
    return ConvexSplit(p1, p2, Fraction(1, 2))


def mask_repr(f: BooleanFunction) -> str:
    return str([mask_vars(m) for m in sorted(anf_decompose(f).monomials)])
