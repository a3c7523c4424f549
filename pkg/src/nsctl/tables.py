"""Exact probability tables over finite alphabets.

Strategies are stored as conditionals ``P(x, y | a, b)`` indexed ``[a][b][x][y]``
(rows x, columns y inside each observation context). All entries are
``fractions.Fraction`` values, which are always kept in lowest terms.
"""

from __future__ import annotations

import itertools
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import (
    AlphabetMismatch,
    ContextNotNormalized,
    IndexOutOfRange,
    NegativeEntry,
    PriorNotNormalized,
    ShapeError,
)

VENKAT = "venkat"
VIVEK = "vivek"
SIDES = (VENKAT, VIVEK)


def to_fraction(value) -> Fraction:
    """Convert ints, Fractions and ``"p/q"`` strings; floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not probabilities")
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, numbers.Rational):
        return Fraction(value.numerator, value.denominator)
    raise TypeError(f"exact rational required, got {type(value).__name__}")


def format_fraction(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Alphabets:
    nA: int
    nB: int
    nX: int
    nY: int

    def __post_init__(self):
        for name in ("nA", "nB", "nX", "nY"):
            n = getattr(self, name)
            if not isinstance(n, int) or n < 1:
                raise ShapeError(f"{name} must be a positive integer, got {n!r}")

    @property
    def is_binary(self) -> bool:
        return self.nA == self.nB == self.nX == self.nY == 2

    def contexts(self) -> Iterator[tuple[int, int]]:
        return itertools.product(range(self.nA), range(self.nB))

    def indices(self) -> Iterator[tuple[int, int, int, int]]:
        """All (a, b, x, y) in lexicographic order."""
        return itertools.product(
            range(self.nA), range(self.nB), range(self.nX), range(self.nY)
        )

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.nA, self.nB, self.nX, self.nY)


BINARY = Alphabets(2, 2, 2, 2)


def _nested(shape, fill):
    if len(shape) == 1:
        return tuple(fill() for _ in range(shape[0]))
    return tuple(_nested(shape[1:], fill) for _ in range(shape[0]))


def _freeze(raw, shape, index=()):
    """Turn a nested sequence into nested tuples of Fractions, checking shape."""
    if len(shape) == 0:
        return to_fraction(raw)
    if isinstance(raw, (str, bytes)) or not isinstance(raw, Sequence):
        raise ShapeError(f"expected a sequence at index {index}")
    if len(raw) != shape[0]:
        raise ShapeError(
            f"expected length {shape[0]} at index {index}, got {len(raw)}"
        )
    return tuple(_freeze(r, shape[1:], index + (i,)) for i, r in enumerate(raw))


@dataclass(frozen=True)
class Strategy:
    """A conditional distribution ``P(x, y | a, b)``.

    Construction validates nonnegativity and exact per-context
    normalization; an invalid table never becomes a ``Strategy``.
    """

    alphabets: Alphabets
    table: tuple

    def __post_init__(self):
        al = self.alphabets
        table = _freeze(self.table, (al.nA, al.nB, al.nX, al.nY))
        object.__setattr__(self, "table", table)
        for a, b in al.contexts():
            total = Fraction(0)
            for x in range(al.nX):
                for y in range(al.nY):
                    v = table[a][b][x][y]
                    if v < 0:
                        raise NegativeEntry((a, b, x, y), v)
                    total += v
            if total != 1:
                raise ContextNotNormalized(a, b, 1 - total)

    def __getitem__(self, idx):
        a, b, x, y = idx
        return self.table[a][b][x][y]

    def block(self, a: int, b: int) -> tuple:
        return self.table[a][b]

    def entries(self) -> Iterator[tuple[tuple[int, int, int, int], Fraction]]:
        for idx in self.alphabets.indices():
            yield idx, self[idx]

    def flat(self) -> tuple:
        return tuple(v for _, v in self.entries())

    @classmethod
    def from_function(cls, alphabets: Alphabets, fn) -> "Strategy":
        al = alphabets
        table = [
            [
                [[fn(a, b, x, y) for y in range(al.nY)] for x in range(al.nX)]
                for b in range(al.nB)
            ]
            for a in range(al.nA)
        ]
        return cls(al, table)

    @classmethod
    def from_blocks(cls, blocks: dict) -> "Strategy":
        """Build from ``{(a, b): [[row x=0], [row x=1], ...]}``."""
        nA = 1 + max(a for a, _ in blocks)
        nB = 1 + max(b for _, b in blocks)
        first = next(iter(blocks.values()))
        al = Alphabets(nA, nB, len(first), len(first[0]))
        return cls.from_function(al, lambda a, b, x, y: to_fraction(blocks[a, b][x][y]))


def validate_strategy(candidate, alphabets: Alphabets | None = None) -> Strategy:
    """Check a raw ``[a][b][x][y]`` table and return it as a ``Strategy``.

    Alphabet sizes are read off the nesting when not given.
    """
    if alphabets is None:
        try:
            nA = len(candidate)
            nB = len(candidate[0])
            nX = len(candidate[0][0])
            nY = len(candidate[0][0][0])
        except (TypeError, IndexError) as exc:
            raise ShapeError("candidate is not a 4-index table") from exc
        alphabets = Alphabets(nA, nB, nX, nY)
    return Strategy(alphabets, candidate)


@dataclass(frozen=True)
class ObservationPrior:
    """Joint distribution ``P(a, b)`` of the two observations."""

    nA: int
    nB: int
    table: tuple

    def __post_init__(self):
        table = _freeze(self.table, (self.nA, self.nB))
        object.__setattr__(self, "table", table)
        total = Fraction(0)
        for a in range(self.nA):
            for b in range(self.nB):
                if table[a][b] < 0:
                    raise NegativeEntry((a, b), table[a][b])
                total += table[a][b]
        if total != 1:
            raise PriorNotNormalized(1 - total)

    def __getitem__(self, idx):
        a, b = idx
        return self.table[a][b]

    @classmethod
    def uniform(cls, nA: int, nB: int) -> "ObservationPrior":
        q = Fraction(1, nA * nB)
        return cls(nA, nB, _nested((nA, nB), lambda: q))

    @classmethod
    def point_mass(cls, nA: int, nB: int, a: int, b: int) -> "ObservationPrior":
        rows = [[Fraction(int(i == a and j == b)) for j in range(nB)] for i in range(nA)]
        return cls(nA, nB, rows)

    @property
    def is_uniform(self) -> bool:
        q = Fraction(1, self.nA * self.nB)
        return all(v == q for row in self.table for v in row)

    @property
    def has_full_support(self) -> bool:
        return all(v > 0 for row in self.table for v in row)

    def marginal_a(self) -> tuple:
        return tuple(sum(row, Fraction(0)) for row in self.table)

    def marginal_b(self) -> tuple:
        return tuple(
            sum((self.table[a][b] for a in range(self.nA)), Fraction(0))
            for b in range(self.nB)
        )


@dataclass(frozen=True)
class JointDistribution:
    """``P(x, y, a, b)``, indexed ``[x][y][a][b]``."""

    alphabets: Alphabets
    table: tuple

    def __post_init__(self):
        al = self.alphabets
        table = _freeze(self.table, (al.nX, al.nY, al.nA, al.nB))
        object.__setattr__(self, "table", table)
        total = Fraction(0)
        for x, y, a, b in itertools.product(
            range(al.nX), range(al.nY), range(al.nA), range(al.nB)
        ):
            v = table[x][y][a][b]
            if v < 0:
                raise NegativeEntry((x, y, a, b), v)
            total += v
        if total != 1:
            raise PriorNotNormalized(1 - total)

    def __getitem__(self, idx):
        x, y, a, b = idx
        return self.table[x][y][a][b]


def _check_index(name: str, value: int, size: int) -> None:
    if not (isinstance(value, int) and 0 <= value < size):
        raise IndexOutOfRange(f"{name}={value!r} outside range(0, {size})")


def action_marginal(s: Strategy, side: str, a: int, b: int) -> tuple:
    """``P(x | a, b)`` for Venkat or ``P(y | a, b)`` for Vivek."""
    al = s.alphabets
    _check_index("a", a, al.nA)
    _check_index("b", b, al.nB)
    block = s.block(a, b)
    if side == VENKAT:
        return tuple(sum(block[x], Fraction(0)) for x in range(al.nX))
    if side == VIVEK:
        return tuple(
            sum((block[x][y] for x in range(al.nX)), Fraction(0)) for y in range(al.nY)
        )
    raise ValueError(f"side must be one of {SIDES}, got {side!r}")


def joint_from_prior(s: Strategy, p: ObservationPrior) -> JointDistribution:
    al = s.alphabets
    if (al.nA, al.nB) != (p.nA, p.nB):
        raise AlphabetMismatch((al.nA, al.nB), (p.nA, p.nB))
    table = [
        [
            [[s[a, b, x, y] * p[a, b] for b in range(al.nB)] for a in range(al.nA)]
            for y in range(al.nY)
        ]
        for x in range(al.nX)
    ]
    return JointDistribution(al, table)
