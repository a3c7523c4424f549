"""Line-oriented text format for strategies.

::

    alphabets <nA> <nB> <nX> <nY>
    prior uniform            | prior table + nA rows of nB rationals
    context <a> <b>          # once per (a, b)
    <nY rationals>           # nX rows

``#`` starts a comment; rationals are ``p/q`` or a bare integer.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import MissingContext, StrategySyntaxError
from .tables import Alphabets, ObservationPrior, Strategy, format_fraction

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


def significant_lines(text: str) -> Iterator[tuple[int, list[str]]]:
    """Yield (line number, tokens) for every non-blank, non-comment line."""
    for lineno, line in enumerate(text.splitlines(), start=1):
        tokens = line.split("#", 1)[0].split()
        if tokens:
            yield lineno, tokens


def parse_rational(token: str, lineno: int) -> Fraction:
    if not _RATIONAL.match(token):
        raise StrategySyntaxError(lineno, f"not a rational: {token!r}")
    if "/" in token and int(token.split("/")[1]) == 0:
        raise StrategySyntaxError(lineno, f"zero denominator: {token!r}")
    return Fraction(token)


def parse_int(token: str, lineno: int, minimum: int = 0) -> int:
    if not token.isdigit() or int(token) < minimum:
        raise StrategySyntaxError(lineno, f"expected an integer >= {minimum}: {token!r}")
    return int(token)


class _Lines:
    def __init__(self, text: str):
        self._it = significant_lines(text)
        self.last = 0

    def next(self, what: str) -> tuple[int, list[str]]:
        try:
            lineno, tokens = next(self._it)
        except StopIteration:
            raise StrategySyntaxError(self.last + 1, f"unexpected end of input, expected {what}")
        self.last = lineno
        return lineno, tokens

    def row(self, width: int, what: str) -> list[Fraction]:
        lineno, tokens = self.next(what)
        if len(tokens) != width:
            raise StrategySyntaxError(lineno, f"{what}: expected {width} values, got {len(tokens)}")
        return [parse_rational(t, lineno) for t in tokens]

    def rest(self) -> Iterator[tuple[int, list[str]]]:
        for lineno, tokens in self._it:
            self.last = lineno
            yield lineno, tokens


def parse_strategy(text: str) -> tuple[Strategy, ObservationPrior | None]:
    """Parse strategy text; the prior is ``None`` when declared ``uniform``."""
    lines = _Lines(text)
    lineno, tokens = lines.next("alphabets header")
    if tokens[0] != "alphabets" or len(tokens) != 5:
        raise StrategySyntaxError(lineno, "expected 'alphabets <nA> <nB> <nX> <nY>'")
    al = Alphabets(*(parse_int(t, lineno, 1) for t in tokens[1:]))

    lineno, tokens = lines.next("prior line")
    if tokens == ["prior", "uniform"]:
        prior = None
    elif tokens == ["prior", "table"]:
        rows = [lines.row(al.nB, "prior row") for _ in range(al.nA)]
        prior = ObservationPrior(al.nA, al.nB, rows)
    else:
        raise StrategySyntaxError(lineno, "expected 'prior uniform' or 'prior table'")

    blocks: dict[tuple[int, int], list[list[Fraction]]] = {}
    for lineno, tokens in lines.rest():
        if tokens[0] != "context" or len(tokens) != 3:
            raise StrategySyntaxError(lineno, "expected 'context <a> <b>'")
        a = parse_int(tokens[1], lineno)
        b = parse_int(tokens[2], lineno)
        if a >= al.nA or b >= al.nB:
            raise StrategySyntaxError(lineno, f"context ({a},{b}) outside the alphabets")
        if (a, b) in blocks:
            raise StrategySyntaxError(lineno, f"context ({a},{b}) listed twice")
        blocks[a, b] = [lines.row(al.nY, f"context ({a},{b}) row") for _ in range(al.nX)]

    for a, b in al.contexts():
        if (a, b) not in blocks:
            raise MissingContext(a, b)
    table = [[blocks[a, b] for b in range(al.nB)] for a in range(al.nA)]
    return Strategy(al, table), prior


def _row(values: Iterable[Fraction]) -> str:
    return " ".join(format_fraction(v) for v in values)


def emit_strategy(s: Strategy, prior: ObservationPrior | None = None) -> str:
    al = s.alphabets
    out = [f"alphabets {al.nA} {al.nB} {al.nX} {al.nY}"]
    if prior is None:
        out.append("prior uniform")
    else:
        out.append("prior table")
        out.extend(_row(r) for r in prior.table)
    for a, b in al.contexts():
        out.append(f"context {a} {b}")
        out.extend(_row(r) for r in s.block(a, b))
    return "\n".join(out) + "\n"
