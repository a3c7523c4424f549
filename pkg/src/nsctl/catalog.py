"""Built-in example strategies, embedded as exact constants."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as F

from .errors import UnknownExample
from .polytope import binary_nonlocal_vertices
from .tables import BINARY, ObservationPrior, Strategy

NS_LOCAL = "NS∩L"
NS_NOT_LOCAL = "NS\\L"
SIGNALING = "signaling"

_t = F(1, 3)
_h = F(1, 2)
_s = F(1, 6)

# rows x, columns y
AB3_BLOCKS = {
    (0, 0): [[0, 0, _t], [0, _t, 0], [_t, 0, 0]],
    (0, 1): [[0, _t, 0], [0, 0, _t], [_t, 0, 0]],
    (1, 0): [[0, _t, 0], [_t, 0, 0], [0, 0, _t]],
    (1, 1): [[_t, 0, 0], [0, _t, 0], [0, 0, _t]],
}

BINARY2_BLOCKS = {
    (0, 0): [[_h, 0], [_t, _s]],
    (0, 1): [[_h, 0], [0, _h]],
    (1, 0): [[_h, 0], [_t, _s]],
    (1, 1): [[0, _h], [_h, 0]],
}


@dataclass(frozen=True)
class NamedExample:
    name: str
    strategy: Strategy
    prior: ObservationPrior
    expected_classification: str
    prior_assumed: bool
    description: str


def _ab3() -> NamedExample:
    return NamedExample(
        "ab3",
        Strategy.from_blocks(AB3_BLOCKS),
        ObservationPrior.uniform(2, 2),
        NS_NOT_LOCAL,
        prior_assumed=False,
        description="ternary-action no-signaling strategy outside the local polytope",
    )


def _binary2() -> NamedExample:
    return NamedExample(
        "binary2",
        Strategy.from_blocks(BINARY2_BLOCKS),
        ObservationPrior.uniform(2, 2),
        NS_NOT_LOCAL,
        prior_assumed=True,
        description="binary no-signaling strategy with CHSH value 8/3",
    )


def _pr_box() -> NamedExample:
    labels = dict(binary_nonlocal_vertices())
    return NamedExample(
        "pr-box",
        labels[0, 0, 0],
        ObservationPrior.uniform(2, 2),
        NS_NOT_LOCAL,
        prior_assumed=True,
        description="non-local vertex x xor y = ab",
    )


def _uniform() -> NamedExample:
    q = F(1, BINARY.nX * BINARY.nY)
    return NamedExample(
        "uniform",
        Strategy.from_function(BINARY, lambda a, b, x, y: q),
        ObservationPrior.uniform(2, 2),
        NS_LOCAL,
        prior_assumed=True,
        description="all outcomes equally likely in every context",
    )


_BUILDERS = {"ab3": _ab3, "binary2": _binary2, "pr-box": _pr_box, "uniform": _uniform}
EXAMPLE_NAMES = tuple(_BUILDERS)


def get_example(name: str) -> NamedExample:
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise UnknownExample(name) from None


# reference P(x, y | a, b, w) of the one-way protocol for w = 1, 2
ONE_WAY_TABLE = {
    1: {
        (0, 0): [[0, 0], [1, 0]],
        (0, 1): [[0, 0], [0, 1]],
        (1, 0): [[1, 0], [0, 0]],
        (1, 1): [[0, 1], [0, 0]],
    },
    2: {
        (0, 0): [[1, 0], [0, 0]],
        (0, 1): [[1, 0], [0, 0]],
        (1, 0): [[0, 0], [1, 0]],
        (1, 1): [[0, 0], [1, 0]],
    },
}
