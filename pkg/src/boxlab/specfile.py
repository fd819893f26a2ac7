"""Box specification files.

Grammar::

    parties: <int>
    f: <expr>
    epsilon: <p>/<q>          (optional, default 1)

    expr   := term ('+' term)*
    term   := factor ('*' factor)*
    factor := 'x' <int> | '1' | '0'

``+`` is XOR and ``*`` is AND; repeated monomials cancel. Blank lines and
``#`` comments are ignored.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .boolfn import AnfForm, BooleanFunction, format_anf, from_anf


class SpecError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{line}:{column}: {message}" if line else message)
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class BoxSpec:
    parties: int
    anf: AnfForm
    epsilon: Fraction = Fraction(1)

    @property
    def function(self) -> BooleanFunction:
        return from_anf(self.anf)


_TOKEN = re.compile(r"\s*(?:(x)(\d+)|(\d+)|([+*]))")
_RATIONAL = re.compile(r"^(\d+)(?:/(\d+))?$")


def parse_expr(text: str, parties: int, line: int = 0, offset: int = 0) -> AnfForm:
    """Parse a polynomial over GF(2) into its (cancelled) ANF."""
    pos = 0
    monomials: set[int] = set()
    current: int | None = 0  # None once a factor 0 kills the term
    expect_factor = True
    end = len(text.rstrip())
    while pos < end:
        m = _TOKEN.match(text, pos)
        col = offset + pos + 1 + (len(text[pos:]) - len(text[pos:].lstrip()))
        if not m:
            raise SpecError(f"unexpected character {text[pos:].lstrip()[:1]!r}", line, col)
        pos = m.end()
        if m.group(4):
            if expect_factor:
                raise SpecError(f"expected a factor before {m.group(4)!r}", line, col)
            if m.group(4) == "+":
                if current is not None:
                    monomials ^= {current}
                current = 0
            expect_factor = True
            continue
        if not expect_factor:
            raise SpecError("expected '+' or '*'", line, col)
        expect_factor = False
        if m.group(1):
            i = int(m.group(2))
            if not 1 <= i <= parties:
                raise SpecError(f"variable x{i} outside 1..{parties}", line, col)
            if current is not None:
                current |= 1 << (i - 1)
        else:
            v = m.group(3)
            if v not in ("0", "1"):
                raise SpecError(f"constant {v} is not 0 or 1", line, col)
            if v == "0":
                current = None
    if expect_factor:
        raise SpecError("expression ends without a factor", line, offset + end + 1)
    if current is not None:
        monomials ^= {current}
    return AnfForm(parties, frozenset(monomials))


def parse_rational(text: str, line: int = 0, column: int = 0) -> Fraction:
    m = _RATIONAL.match(text.strip())
    if not m:
        raise SpecError(f"bad rational {text.strip()!r}", line, column)
    num, den = int(m.group(1)), int(m.group(2) or 1)
    if den == 0:
        raise SpecError("zero denominator", line, column)
    value = Fraction(num, den)
    if value > 1:
        raise SpecError(f"epsilon {value} outside [0, 1]", line, column)
    return value


def parse_spec(text: str) -> BoxSpec:
    fields: dict[str, tuple[str, int, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        if ":" not in body:
            raise SpecError("expected 'key: value'", lineno, len(body) - len(body.lstrip()) + 1)
        key, value = body.split(":", 1)
        name = key.strip()
        if name not in ("parties", "f", "epsilon"):
            raise SpecError(f"unknown key {name!r}", lineno, len(key) - len(key.lstrip()) + 1)
        if name in fields:
            raise SpecError(f"duplicate key {name!r}", lineno, 1)
        fields[name] = (value, lineno, len(key) + 2)
    for required in ("parties", "f"):
        if required not in fields:
            raise SpecError(f"missing '{required}:' line")
    value, lineno, col = fields["parties"]
    if not re.fullmatch(r"\s*\d+\s*", value):
        raise SpecError(f"bad party count {value.strip()!r}", lineno, col)
    parties = int(value)
    if not 1 <= parties <= 8:
        raise SpecError(f"party count {parties} outside 1..8", lineno, col)
    value, lineno, col = fields["f"]
    anf = parse_expr(value, parties, lineno, col - 1)
    eps = Fraction(1)
    if "epsilon" in fields:
        value, lineno, col = fields["epsilon"]
        eps = parse_rational(value, lineno, col)
    return BoxSpec(parties, anf, eps)


def format_spec(spec: BoxSpec) -> str:
    """Canonical text form; parsing it gives back an equal spec."""
    eps = spec.epsilon
    return f"parties: {spec.parties}\nf: {format_anf(spec.anf)}\nepsilon: {eps.numerator}/{eps.denominator}\n"
