"""Two-phase simplex over exact rationals with Bland's anti-cycling rule.

Problems are given in standard form: minimize ``c.x`` subject to ``A x = b``,
``x >= 0``. Rows of ``A`` are sparse ``{column: coefficient}`` dicts.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

ZERO = Fraction(0)


@dataclass
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: list[Fraction] | None = None
    objective: Fraction | None = None
    farkas: list[Fraction] | None = None
    """For infeasible problems: ``y`` with ``y.A <= 0`` columnwise and ``y.b > 0``."""


class _Tableau:
    def __init__(self, rows, rhs, basis, ncols):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.ncols = ncols
        self.obj: dict[int, Fraction] = {}
        self.obj_value = ZERO  # negated objective value, tableau convention

    def set_objective(self, cost: Mapping[int, Fraction]) -> None:
        obj = {j: Fraction(v) for j, v in cost.items() if v}
        value = ZERO
        for i, bv in enumerate(self.basis):
            cb = obj.get(bv)
            if not cb:
                continue
            for j, v in self.rows[i].items():
                nv = obj.get(j, ZERO) - cb * v
                if nv:
                    obj[j] = nv
                else:
                    obj.pop(j, None)
            value -= cb * self.rhs[i]
        self.obj = obj
        self.obj_value = value

    def pivot(self, r: int, j: int) -> None:
        row = self.rows[r]
        piv = row[j]
        if piv != 1:
            row = {k: v / piv for k, v in row.items()}
            self.rows[r] = row
            self.rhs[r] /= piv
        rhs_r = self.rhs[r]
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other.get(j)
            if not f:
                continue
            for k, v in row.items():
                nv = other.get(k, ZERO) - f * v
                if nv:
                    other[k] = nv
                else:
                    other.pop(k, None)
            self.rhs[i] -= f * rhs_r
        f = self.obj.get(j)
        if f:
            for k, v in row.items():
                nv = self.obj.get(k, ZERO) - f * v
                if nv:
                    self.obj[k] = nv
                else:
                    self.obj.pop(k, None)
            self.obj_value -= f * rhs_r
        self.basis[r] = j

    def run(self, allowed) -> str:
        while True:
            entering = min((j for j, v in self.obj.items() if v < 0 and allowed(j)), default=None)
            if entering is None:
                return "optimal"
            best = None
            for i, row in enumerate(self.rows):
                a = row.get(entering)
                if a is not None and a > 0:
                    key = (self.rhs[i] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded"
            self.pivot(best[1], entering)


def solve(
    c: Mapping[int, Fraction] | Sequence[Fraction],
    rows: Sequence[Mapping[int, Fraction]],
    b: Sequence[Fraction],
    ncols: int,
) -> LPResult:
    if not isinstance(c, Mapping):
        c = {j: v for j, v in enumerate(c) if v}
    m = len(rows)
    trows, rhs, signs = [], [], []
    for i, (row, bi) in enumerate(zip(rows, b)):
        s = -1 if bi < 0 else 1
        trow = {j: Fraction(v) * s for j, v in row.items() if v}
        trow[ncols + i] = Fraction(1)  # artificial
        trows.append(trow)
        rhs.append(Fraction(bi) * s)
        signs.append(s)
    t = _Tableau(trows, rhs, [ncols + i for i in range(m)], ncols + m)
    t.set_objective({ncols + i: 1 for i in range(m)})
    t.run(lambda j: True)

    if t.obj_value != 0:
        # reduced cost of artificial i is 1 - y_i
        y = [signs[i] * (1 - t.obj.get(ncols + i, ZERO)) for i in range(m)]
        return LPResult("infeasible", farkas=y)

    # drive zero-level artificials out of the basis; drop redundant rows
    keep = []
    for i, bv in enumerate(t.basis):
        if bv >= ncols:
            j = min((k for k, v in t.rows[i].items() if k < ncols and v), default=None)
            if j is None:
                continue
            t.pivot(i, j)
        keep.append(i)
    t.rows = [t.rows[i] for i in keep]
    t.rhs = [t.rhs[i] for i in keep]
    t.basis = [t.basis[i] for i in keep]

    t.set_objective(c)
    status = t.run(lambda j: j < ncols)
    if status == "unbounded":
        return LPResult("unbounded")
    x = [ZERO] * ncols
    for i, bv in enumerate(t.basis):
        if bv < ncols:
            x[bv] = t.rhs[i]
    return LPResult("optimal", x=x, objective=-t.obj_value)
