"""Brute-force reference computations, deliberately independent of the
wiring engine and the fast transforms."""
from fractions import Fraction
from itertools import product

from boxlab.boolfn import BooleanFunction


def bs_by_enumeration(table, n):
    """Two i.i.d. copies of ``table`` under the BS protocol, summed directly."""
    size = 1 << n
    out = [[Fraction(0)] * size for _ in range(size)]
    for x in range(size):
        for a, pa in enumerate(table[x]):
            if not pa:
                continue
            y = x & ~a & (size - 1)
            for b, pb in enumerate(table[y]):
                if pb:
                    out[x][a ^ b] += pa * pb
    return out


def anf_by_evaluation(f: BooleanFunction):
    """ANF coefficients from the subset-sum formula a_I = XOR_{x <= I} f(x)."""
    size = 1 << f.var_count
    monomials = set()
    for mask in range(size):
        acc = 0
        sub = mask
        while True:
            acc ^= f(sub)
            if sub == 0:
                break
            sub = (sub - 1) & mask
        if acc:
            monomials.add(mask)
    return monomials


def min_affine_distance(f: BooleanFunction) -> int:
    n = f.var_count
    best = None
    for mask, c in product(range(1 << n), (0, 1)):
        d = sum(f(x) != (bin(x & mask).count("1") + c) % 2 for x in range(1 << n))
        best = d if best is None else min(best, d)
    return best


def chsh_value(table) -> Fraction:
    """Average over x of Pr[a1 xor a2 = x1 x2] for a two-port box."""
    total = Fraction(0)
    for x in range(4):
        target = (x & 1) & (x >> 1)
        total += sum(p for a, p in enumerate(table[x]) if ((a & 1) ^ (a >> 1)) == target)
    return total / 4
