"""Correlators and the eight CHSH functionals for binary strategies."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotBinary
from .polytope import SeparatingFunctional, max_over_locals
from .tables import BINARY, Strategy

LOCAL_BOUND = Fraction(2)


@dataclass(frozen=True, order=True)
class ChshVariant:
    """Sign pattern ``(-1)^(ab + alpha a + beta b + gamma)`` on the correlators.

    Labels coincide with the non-local vertex labels: the PR box
    ``(alpha, beta, gamma)`` scores 4 on the variant of the same name.
    """

    alpha: int = 0
    beta: int = 0
    gamma: int = 0

    def sign(self, a: int, b: int) -> int:
        return -1 if (a & b) ^ (self.alpha & a) ^ (self.beta & b) ^ self.gamma else 1

    def label(self) -> tuple[int, int, int]:
        return (self.alpha, self.beta, self.gamma)


ALL_VARIANTS = tuple(ChshVariant(*bits) for bits in itertools.product((0, 1), repeat=3))


def _require_binary(s: Strategy) -> None:
    if not s.alphabets.is_binary:
        raise NotBinary(s.alphabets.as_tuple())


def correlator(s: Strategy, a: int, b: int) -> Fraction:
    _require_binary(s)
    block = s.block(a, b)
    return block[0][0] - block[0][1] - block[1][0] + block[1][1]


def chsh_value(s: Strategy, v: ChshVariant = ChshVariant()) -> Fraction:
    _require_binary(s)
    return sum(
        (v.sign(a, b) * correlator(s, a, b) for a in (0, 1) for b in (0, 1)),
        Fraction(0),
    )


def max_chsh_violation(s: Strategy) -> tuple[ChshVariant, Fraction]:
    best = ALL_VARIANTS[0], chsh_value(s, ALL_VARIANTS[0])
    for v in ALL_VARIANTS[1:]:
        value = chsh_value(s, v)
        if value > best[1]:
            best = v, value
    return best


def chsh_functional(v: ChshVariant, s: Strategy | None = None) -> SeparatingFunctional:
    """The variant as a linear functional on strategy entries.

    ``max_on_local`` is computed exhaustively (it is 2). Without a strategy
    the value field is 0.
    """
    coeffs = tuple(
        Fraction(v.sign(a, b) * (-1) ** (x + y))
        for a, b, x, y in BINARY.indices()
    )
    value = chsh_value(s, v) if s is not None else Fraction(0)
    return SeparatingFunctional(BINARY, coeffs, value, max_over_locals(coeffs, BINARY))
