"""Deterministic local strategies and exact membership in the local polytope."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm

from . import simplex
from .errors import AlphabetMismatch, CapExceeded, StrategySyntaxError
from .fileformat import parse_int, parse_rational, significant_lines
from .mechanisms import PassiveMechanism
from .tables import BINARY, Alphabets, Strategy, format_fraction

DEFAULT_CAP = 10**6


@dataclass(frozen=True)
class DeterministicLocal:
    """Response functions ``x = f[a]`` and ``y = g[b]``."""

    alphabets: Alphabets
    f: tuple
    g: tuple

    def __post_init__(self):
        al = self.alphabets
        if len(self.f) != al.nA or any(not 0 <= v < al.nX for v in self.f):
            raise ValueError(f"f={self.f} is not a map from range({al.nA}) to range({al.nX})")
        if len(self.g) != al.nB or any(not 0 <= v < al.nY for v in self.g):
            raise ValueError(f"g={self.g} is not a map from range({al.nB}) to range({al.nY})")


def deterministic_count(alphabets: Alphabets) -> int:
    return alphabets.nX**alphabets.nA * alphabets.nY**alphabets.nB


def enumerate_deterministic(alphabets: Alphabets, cap: int = DEFAULT_CAP) -> list[DeterministicLocal]:
    count = deterministic_count(alphabets)
    if count > cap:
        raise CapExceeded(count, cap)
    fs = itertools.product(range(alphabets.nX), repeat=alphabets.nA)
    gs = list(itertools.product(range(alphabets.nY), repeat=alphabets.nB))
    return [DeterministicLocal(alphabets, f, g) for f in fs for g in gs]


def induce_deterministic(d: DeterministicLocal) -> Strategy:
    return Strategy.from_function(
        d.alphabets, lambda a, b, x, y: Fraction(int(x == d.f[a] and y == d.g[b]))
    )


@dataclass(frozen=True)
class LocalDecomposition:
    atoms: tuple  # of (weight, DeterministicLocal)

    def __post_init__(self):
        if not self.atoms:
            raise ValueError("empty decomposition")
        if any(w <= 0 for w, _ in self.atoms):
            raise ValueError("atom weights must be positive")
        if sum(w for w, _ in self.atoms) != 1:
            raise ValueError("atom weights must sum to 1")

    @property
    def alphabets(self) -> Alphabets:
        return self.atoms[0][1].alphabets

    def reconstruct(self) -> Strategy:
        al = self.alphabets
        return Strategy.from_function(
            al,
            lambda a, b, x, y: sum(
                (w for w, d in self.atoms if d.f[a] == x and d.g[b] == y), Fraction(0)
            ),
        )


@dataclass(frozen=True)
class SeparatingFunctional:
    """Coefficients ``c[a, b, x, y]`` with ``c . s > max_d c . d`` over deterministic d."""

    alphabets: Alphabets
    coeffs: tuple  # flat, (a, b, x, y) lexicographic
    value_on_strategy: Fraction
    max_on_local: Fraction

    def coefficient(self, a, b, x, y) -> Fraction:
        al = self.alphabets
        return self.coeffs[((a * al.nB + b) * al.nX + x) * al.nY + y]

    @property
    def separates(self) -> bool:
        return self.value_on_strategy > self.max_on_local


@dataclass(frozen=True)
class MembershipResult:
    feasible: bool
    decomposition: LocalDecomposition | None = None
    certificate: SeparatingFunctional | None = None


def evaluate_functional(c: SeparatingFunctional, s: Strategy) -> Fraction:
    if c.alphabets != s.alphabets:
        raise AlphabetMismatch(c.alphabets.as_tuple(), s.alphabets.as_tuple())
    return sum((k * v for k, v in zip(c.coeffs, s.flat())), Fraction(0))


def _value_on_deterministic(coeffs, al: Alphabets, d: DeterministicLocal) -> Fraction:
    total = Fraction(0)
    for a in range(al.nA):
        for b in range(al.nB):
            total += coeffs[((a * al.nB + b) * al.nX + d.f[a]) * al.nY + d.g[b]]
    return total


def max_over_locals(coeffs, alphabets: Alphabets, cap: int = DEFAULT_CAP) -> Fraction:
    return max(
        _value_on_deterministic(coeffs, alphabets, d)
        for d in enumerate_deterministic(alphabets, cap)
    )


def _integer_scaled(values) -> tuple:
    """Positive rescaling to coprime integers; keeps every strict inequality."""
    den = reduce(lcm, (v.denominator for v in values), 1)
    ints = [int(v * den) for v in values]
    g = reduce(gcd, ints, 0) or 1
    return tuple(Fraction(v // g) for v in ints)


def local_membership(s: Strategy, cap: int = DEFAULT_CAP) -> MembershipResult:
    """Decide whether ``s`` is a convex mixture of deterministic local strategies.

    Columns are the deterministic strategies in enumeration order; rows are
    the entries of ``s`` followed by the weight-normalization row.
    """
    al = s.alphabets
    dets = enumerate_deterministic(al, cap)
    target = list(s.flat())
    n_entries = len(target)
    A = [[Fraction(0)] * len(dets) for _ in range(n_entries + 1)]
    for j, d in enumerate(dets):
        for a in range(al.nA):
            for b in range(al.nB):
                A[((a * al.nB + b) * al.nX + d.f[a]) * al.nY + d.g[b]][j] = Fraction(1)
        A[n_entries][j] = Fraction(1)
    rhs = target + [Fraction(1)]

    result = simplex.phase_one(A, rhs)
    if isinstance(result, simplex.Feasible):
        atoms = tuple((w, dets[j]) for j, w in enumerate(result.x) if w > 0)
        return MembershipResult(True, decomposition=LocalDecomposition(atoms))

    # y.A_j <= 0 for every deterministic column j and y.rhs > 0; the weight
    # row's multiplier is absorbed into the exhaustive local maximum
    coeffs = _integer_scaled(result.y[:n_entries])
    value = sum((k * v for k, v in zip(coeffs, target)), Fraction(0))
    local_max = max(_value_on_deterministic(coeffs, al, d) for d in dets)
    return MembershipResult(
        False, certificate=SeparatingFunctional(al, coeffs, value, local_max)
    )


def binary_local_vertices() -> list[tuple[tuple[int, int, int, int], Strategy]]:
    """The 16 vertices ``x = alpha a + beta``, ``y = gamma b + delta`` (mod 2)."""
    out = []
    for alpha, beta, gamma, delta in itertools.product((0, 1), repeat=4):
        f = tuple((alpha * a) ^ beta for a in (0, 1))
        g = tuple((gamma * b) ^ delta for b in (0, 1))
        out.append(((alpha, beta, gamma, delta), induce_deterministic(DeterministicLocal(BINARY, f, g))))
    return out


def binary_nonlocal_vertices() -> list[tuple[tuple[int, int, int], Strategy]]:
    """The 8 PR-type boxes: 1/2 on ``x xor y = ab xor alpha a xor beta b xor gamma``."""
    half = Fraction(1, 2)
    out = []
    for alpha, beta, gamma in itertools.product((0, 1), repeat=3):
        s = Strategy.from_function(
            BINARY,
            lambda a, b, x, y: half if x ^ y == (a & b) ^ (alpha & a) ^ (beta & b) ^ gamma else Fraction(0),
        )
        out.append(((alpha, beta, gamma), s))
    return out


def emit_functional(c: SeparatingFunctional) -> str:
    al = c.alphabets
    out = [f"functional {al.nA} {al.nB} {al.nX} {al.nY}"]
    out.extend(format_fraction(k) for k in c.coeffs)
    out.append(f"value {format_fraction(c.value_on_strategy)}")
    out.append(f"localmax {format_fraction(c.max_on_local)}")
    return "\n".join(out) + "\n"


def parse_functional(text: str) -> SeparatingFunctional:
    lines = list(significant_lines(text))
    if not lines:
        raise StrategySyntaxError(1, "empty input")
    lineno, tokens = lines[0]
    if tokens[0] != "functional" or len(tokens) != 5:
        raise StrategySyntaxError(lineno, "expected 'functional <nA> <nB> <nX> <nY>'")
    al = Alphabets(*(parse_int(t, lineno, 1) for t in tokens[1:]))
    n = al.nA * al.nB * al.nX * al.nY
    if len(lines) != n + 3:
        raise StrategySyntaxError(lines[-1][0], f"expected {n} coefficients plus value and localmax")
    coeffs = []
    for lineno, tokens in lines[1 : n + 1]:
        if len(tokens) != 1:
            raise StrategySyntaxError(lineno, "expected one coefficient")
        coeffs.append(parse_rational(tokens[0], lineno))
    tail = {}
    for lineno, tokens in lines[n + 1 :]:
        if len(tokens) != 2 or tokens[0] not in ("value", "localmax"):
            raise StrategySyntaxError(lineno, "expected 'value <r>' or 'localmax <r>'")
        tail[tokens[0]] = parse_rational(tokens[1], lineno)
    if set(tail) != {"value", "localmax"}:
        raise StrategySyntaxError(lines[-1][0], "need both 'value' and 'localmax'")
    return SeparatingFunctional(al, tuple(coeffs), tail["value"], tail["localmax"])


def decomposition_to_mechanism(d: LocalDecomposition) -> PassiveMechanism:
    """Read a decomposition as passive common randomness: W picks the atom."""
    al = d.alphabets

    def point(n, k):
        return tuple(Fraction(int(i == k)) for i in range(n))

    return PassiveMechanism(
        tuple(w for w, _ in d.atoms),
        tuple(tuple(point(al.nX, det.f[a]) for a in range(al.nA)) for _, det in d.atoms),
        tuple(tuple(point(al.nY, det.g[b]) for b in range(al.nB)) for _, det in d.atoms),
    )
