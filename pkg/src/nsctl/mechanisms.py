"""Generation mechanisms for strategies and a seeded exact sampler.

Mechanism tables use these layouts (W is 0-based internally):

- ``p_w[w]``, ``p_w_given_ab[a][b][w]``
- ``p_x_given_aw[w][a][x]``, ``p_y_given_bw[w][b][y]``

The built-in constructors describe W as 1, 2, ...; ``w = 1`` is index 0.
"""

from __future__ import annotations

import bisect
import hashlib
import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import lcm

from .errors import AlphabetMismatch, RowNotNormalized, StrategySyntaxError
from .fileformat import parse_int, significant_lines
from .nosignaling import WJoint, wjoint_from_prior
from .tables import BINARY, Alphabets, ObservationPrior, Strategy, _freeze

HALF = Fraction(1, 2)


def _check_rows(rows, where):
    for idx, row in rows:
        if any(v < 0 for v in row):
            raise RowNotNormalized(f"{where}{idx}", "negative entry")
        total = sum(row, Fraction(0))
        if total != 1:
            raise RowNotNormalized(f"{where}{idx}", 1 - total)


@dataclass(frozen=True)
class PassiveMechanism:
    p_w: tuple
    p_x_given_aw: tuple
    p_y_given_bw: tuple

    def __post_init__(self):
        nW = len(self.p_w)
        nA, nX = len(self.p_x_given_aw[0]), len(self.p_x_given_aw[0][0])
        nB, nY = len(self.p_y_given_bw[0]), len(self.p_y_given_bw[0][0])
        object.__setattr__(self, "p_w", _freeze(self.p_w, (nW,)))
        object.__setattr__(self, "p_x_given_aw", _freeze(self.p_x_given_aw, (nW, nA, nX)))
        object.__setattr__(self, "p_y_given_bw", _freeze(self.p_y_given_bw, (nW, nB, nY)))
        _check_rows([((), self.p_w)], "P(W)")
        _check_rows(
            [((w, a), self.p_x_given_aw[w][a]) for w in range(nW) for a in range(nA)],
            "P(X|A,W) at (w,a)=",
        )
        _check_rows(
            [((w, b), self.p_y_given_bw[w][b]) for w in range(nW) for b in range(nB)],
            "P(Y|B,W) at (w,b)=",
        )

    @property
    def nW(self) -> int:
        return len(self.p_w)

    @property
    def alphabets(self) -> Alphabets:
        return Alphabets(
            len(self.p_x_given_aw[0]),
            len(self.p_y_given_bw[0]),
            len(self.p_x_given_aw[0][0]),
            len(self.p_y_given_bw[0][0]),
        )


@dataclass(frozen=True)
class ActiveMechanism:
    p_w_given_ab: tuple
    p_x_given_aw: tuple
    p_y_given_bw: tuple

    def __post_init__(self):
        nA, nB = len(self.p_w_given_ab), len(self.p_w_given_ab[0])
        nW = len(self.p_w_given_ab[0][0])
        nX, nY = len(self.p_x_given_aw[0][0]), len(self.p_y_given_bw[0][0])
        object.__setattr__(self, "p_w_given_ab", _freeze(self.p_w_given_ab, (nA, nB, nW)))
        object.__setattr__(self, "p_x_given_aw", _freeze(self.p_x_given_aw, (nW, nA, nX)))
        object.__setattr__(self, "p_y_given_bw", _freeze(self.p_y_given_bw, (nW, nB, nY)))
        _check_rows(
            [((a, b), self.p_w_given_ab[a][b]) for a in range(nA) for b in range(nB)],
            "P(W|A,B) at (a,b)=",
        )
        _check_rows(
            [((w, a), self.p_x_given_aw[w][a]) for w in range(nW) for a in range(nA)],
            "P(X|A,W) at (w,a)=",
        )
        _check_rows(
            [((w, b), self.p_y_given_bw[w][b]) for w in range(nW) for b in range(nB)],
            "P(Y|B,W) at (w,b)=",
        )

    @property
    def nW(self) -> int:
        return len(self.p_w_given_ab[0][0])

    @property
    def alphabets(self) -> Alphabets:
        return Alphabets(
            len(self.p_w_given_ab),
            len(self.p_w_given_ab[0]),
            len(self.p_x_given_aw[0][0]),
            len(self.p_y_given_bw[0][0]),
        )

    @classmethod
    def from_passive(cls, m: PassiveMechanism) -> "ActiveMechanism":
        al = m.alphabets
        rows = [[m.p_w for _ in range(al.nB)] for _ in range(al.nA)]
        return cls(rows, m.p_x_given_aw, m.p_y_given_bw)


def induce_behavioral(p_x_given_a, p_y_given_b) -> Strategy:
    px = _freeze(p_x_given_a, (len(p_x_given_a), len(p_x_given_a[0])))
    py = _freeze(p_y_given_b, (len(p_y_given_b), len(p_y_given_b[0])))
    _check_rows(list(enumerate(px)), "P(X|A) at a=")
    _check_rows(list(enumerate(py)), "P(Y|B) at b=")
    al = Alphabets(len(px), len(py), len(px[0]), len(py[0]))
    return Strategy.from_function(al, lambda a, b, x, y: px[a][x] * py[b][y])


def induce_active(m: ActiveMechanism) -> Strategy:
    px, py, pw = m.p_x_given_aw, m.p_y_given_bw, m.p_w_given_ab
    return Strategy.from_function(
        m.alphabets,
        lambda a, b, x, y: sum(
            (pw[a][b][w] * px[w][a][x] * py[w][b][y] for w in range(m.nW)), Fraction(0)
        ),
    )


def induce_passive(m: PassiveMechanism) -> Strategy:
    return induce_active(ActiveMechanism.from_passive(m))


def active_wjoint(m: ActiveMechanism, prior: ObservationPrior) -> WJoint:
    return wjoint_from_prior(m.p_w_given_ab, prior)


def _point(n: int, k: int) -> tuple:
    return tuple(Fraction(int(i == k)) for i in range(n))


def paper_active_mechanism() -> ActiveMechanism:
    """Four-valued active common randomness that produces the binary counterexample.

    W = 1, 3 make Venkat flip his bit and W = 2, 4 make him copy it; Vivek
    copies b on W = 1, plays 0 on W = 2, 1 on W = 3 and flips b on W = 4.
    """
    q = Fraction(1, 4)
    p_w_given_ab = [
        [  # a = 0
            [Fraction(1, 3), Fraction(1, 2), Fraction(1, 6), Fraction(0)],  # b = 0
            [q, q, q, q],  # b = 1
        ],
        [  # a = 1
            [Fraction(1, 2), Fraction(1, 3), Fraction(0), Fraction(1, 6)],
            [q, q, q, q],
        ],
    ]
    x_rule = {1: lambda a: a ^ 1, 2: lambda a: a, 3: lambda a: a ^ 1, 4: lambda a: a}
    y_rule = {1: lambda b: b, 2: lambda b: 0, 3: lambda b: 1, 4: lambda b: b ^ 1}
    px = [[_point(2, x_rule[w](a)) for a in (0, 1)] for w in (1, 2, 3, 4)]
    py = [[_point(2, y_rule[w](b)) for b in (0, 1)] for w in (1, 2, 3, 4)]
    return ActiveMechanism(p_w_given_ab, px, py)


# --- one-way communication protocol ------------------------------------------------

ONE_WAY_W = (1, 2, 3)


def one_way_venkat(w: int, a: int) -> tuple:
    """Distribution of Venkat's action given (a, w)."""
    if w == 1:
        return _point(2, a ^ 1)
    if w == 2:
        return _point(2, a)
    return (HALF, HALF)


def one_way_message(w: int, a: int, x: int):
    """What Venkat tells Vivek: (x, a) on W = 3, nothing otherwise."""
    return (x, a) if w == 3 else None


def one_way_vivek(w: int, b: int, message) -> tuple:
    """Distribution of Vivek's action given (b, w) and any message received."""
    if w == 1:
        return _point(2, b)
    if w == 2:
        return _point(2, 0)
    x, a = message
    return _point(2, x ^ (a & b))


@dataclass(frozen=True)
class OneWayProtocol:
    """Marker for the fixed protocol: uniform W on {1, 2, 3} plus a message on W = 3."""

    alphabets: Alphabets = BINARY


def one_way_protocol() -> tuple[Strategy, dict]:
    """The mixed strategy and ``P(x, y | a, b, w)`` for each w in {1, 2, 3}."""
    per_w = {}
    for w in ONE_WAY_W:
        def entry(a, b, x, y, w=w):
            px = one_way_venkat(w, a)[x]
            if px == 0:
                return Fraction(0)
            return px * one_way_vivek(w, b, one_way_message(w, a, x))[y]
        per_w[w] = Strategy.from_function(BINARY, entry)
    third = Fraction(1, 3)
    mixed = Strategy.from_function(
        BINARY, lambda a, b, x, y: third * sum(per_w[w][a, b, x, y] for w in ONE_WAY_W)
    )
    return mixed, per_w


# --- exact sampling ----------------------------------------------------------------

class ExactRNG:
    """Uniform integers below any bound, by rejection on raw 64-bit draws."""

    name = "mt19937-rejection64"

    def __init__(self, seed: int):
        self._rng = random.Random(seed)

    def below(self, n: int) -> int:
        if n == 1:
            return 0
        bits = 64 * max(1, -(-n.bit_length() // 64))
        span = 1 << bits
        limit = span - span % n
        while True:
            r = self._rng.getrandbits(bits)
            if r < limit:
                return r % n


class _Dist:
    """Inverse-CDF sampler for a rational distribution on range(len(probs))."""

    __slots__ = ("fixed", "denominator", "cumulative")

    def __init__(self, probs):
        support = [i for i, p in enumerate(probs) if p]
        self.fixed = support[0] if len(support) == 1 else None
        self.denominator = reduce(lcm, (p.denominator for p in probs), 1)
        self.cumulative = list(
            itertools.accumulate(int(p * self.denominator) for p in probs)
        )

    def draw(self, rng: ExactRNG) -> int:
        if self.fixed is not None:
            return self.fixed
        return bisect.bisect_right(self.cumulative, rng.below(self.denominator))


@dataclass(frozen=True)
class EmpiricalTable:
    alphabets: Alphabets
    counts: tuple  # [a][b][x][y]
    trials_per_context: tuple  # [a][b]
    seed: int
    generator_name: str

    def count(self, a, b, x, y) -> int:
        return self.counts[a][b][x][y]


def _chunk_sizes(trials: int, chunks: int) -> list[int]:
    base, extra = divmod(trials, chunks)
    return [base + (i < extra) for i in range(chunks)]


def _chunk_seed(seed: int, index: int, chunks: int) -> int:
    if chunks == 1:
        return seed
    digest = hashlib.blake2b(f"{seed}/{index}/{chunks}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def _run_chunk(source, prior: ObservationPrior, trials: int, seed: int) -> list[int]:
    al = source.alphabets
    rng = ExactRNG(seed)
    contexts = list(al.contexts())
    ab_dist = _Dist([prior[a, b] for a, b in contexts])
    counts = [0] * (al.nA * al.nB * al.nX * al.nY)

    def cell(a, b, x, y):
        return ((a * al.nB + b) * al.nX + x) * al.nY + y

    if isinstance(source, OneWayProtocol):
        w_dist = _Dist([Fraction(1, 3)] * 3)
        venkat = {(w, a): _Dist(one_way_venkat(w, a)) for w in ONE_WAY_W for a in (0, 1)}
        vivek = {}
        for _ in range(trials):
            a, b = contexts[ab_dist.draw(rng)]
            w = ONE_WAY_W[w_dist.draw(rng)]
            x = venkat[w, a].draw(rng)
            msg = one_way_message(w, a, x)
            key = (w, b, msg)
            if key not in vivek:
                vivek[key] = _Dist(one_way_vivek(w, b, msg))
            y = vivek[key].draw(rng)
            counts[cell(a, b, x, y)] += 1
        return counts

    if isinstance(source, PassiveMechanism):
        shared = _Dist(source.p_w)
        w_dists = {ab: shared for ab in contexts}
    elif isinstance(source, ActiveMechanism):
        w_dists = {(a, b): _Dist(source.p_w_given_ab[a][b]) for a, b in contexts}
    else:
        raise TypeError(f"cannot simulate {type(source).__name__}")
    nW = source.nW
    px = {(w, a): _Dist(source.p_x_given_aw[w][a]) for w in range(nW) for a in range(al.nA)}
    py = {(w, b): _Dist(source.p_y_given_bw[w][b]) for w in range(nW) for b in range(al.nB)}
    for _ in range(trials):
        a, b = contexts[ab_dist.draw(rng)]
        w = w_dists[a, b].draw(rng)
        x = px[w, a].draw(rng)
        y = py[w, b].draw(rng)
        counts[cell(a, b, x, y)] += 1
    return counts


def simulate(
    source,
    prior: ObservationPrior,
    trials: int,
    seed: int,
    chunks: int = 1,
    workers: int = 1,
) -> EmpiricalTable:
    """Sample ``trials`` rounds of ``source`` and tabulate the outcomes.

    The counts depend only on (source, prior, trials, seed, chunks); the
    number of worker processes does not affect them.
    """
    if not isinstance(trials, int) or trials < 1:
        raise ValueError("trials must be a positive integer")
    if not 0 <= seed < 2**64:
        raise ValueError("seed must fit in 64 unsigned bits")
    if chunks < 1:
        raise ValueError("chunks must be positive")
    al = source.alphabets
    if (al.nA, al.nB) != (prior.nA, prior.nB):
        raise AlphabetMismatch((al.nA, al.nB), (prior.nA, prior.nB))

    jobs = [
        (size, _chunk_seed(seed, i, chunks))
        for i, size in enumerate(_chunk_sizes(trials, chunks))
        if size
    ]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_chunk, *zip(*[(source, prior, n, s) for n, s in jobs])))
    else:
        parts = [_run_chunk(source, prior, n, s) for n, s in jobs]
    flat = [sum(col) for col in zip(*parts)]

    it = iter(flat)
    counts = tuple(
        tuple(
            tuple(tuple(next(it) for _ in range(al.nY)) for _ in range(al.nX))
            for _ in range(al.nB)
        )
        for _ in range(al.nA)
    )
    per_context = tuple(
        tuple(sum(sum(r) for r in counts[a][b]) for b in range(al.nB)) for a in range(al.nA)
    )
    return EmpiricalTable(al, counts, per_context, seed, ExactRNG.name)


def empirical_tv(e: EmpiricalTable, s: Strategy) -> tuple[dict, float | None]:
    """Total-variation distance per context; contexts without trials are left out."""
    if e.alphabets != s.alphabets:
        raise AlphabetMismatch(e.alphabets.as_tuple(), s.alphabets.as_tuple())
    al = e.alphabets
    per_context = {}
    for a, b in al.contexts():
        n = e.trials_per_context[a][b]
        if n == 0:
            continue
        dist = sum(
            (abs(Fraction(e.counts[a][b][x][y], n) - s[a, b, x, y])
             for x in range(al.nX) for y in range(al.nY)),
            Fraction(0),
        )
        per_context[a, b] = float(dist / 2)
    return per_context, max(per_context.values(), default=None)


def emit_empirical(e: EmpiricalTable) -> str:
    al = e.alphabets
    out = [f"empirical {al.nA} {al.nB} {al.nX} {al.nY} seed={e.seed} gen={e.generator_name}"]
    for a, b in al.contexts():
        out.append(f"context {a} {b} n={e.trials_per_context[a][b]}")
        out.extend(" ".join(str(c) for c in row) for row in e.counts[a][b])
    return "\n".join(out) + "\n"


def parse_empirical(text: str) -> EmpiricalTable:
    lines = list(significant_lines(text))
    if not lines:
        raise StrategySyntaxError(1, "empty input")
    lineno, tokens = lines[0]
    if tokens[0] != "empirical" or len(tokens) != 7:
        raise StrategySyntaxError(lineno, "expected 'empirical <nA> <nB> <nX> <nY> seed=<s> gen=<name>'")
    al = Alphabets(*(parse_int(t, lineno, 1) for t in tokens[1:5]))
    if not tokens[5].startswith("seed=") or not tokens[6].startswith("gen="):
        raise StrategySyntaxError(lineno, "expected seed=<s> gen=<name>")
    seed = parse_int(tokens[5][5:], lineno)
    gen = tokens[6][4:]
    counts, per_context = {}, {}
    pos = 1
    for a, b in al.contexts():
        if pos >= len(lines):
            raise StrategySyntaxError(lines[-1][0], f"missing context ({a},{b})")
        lineno, tokens = lines[pos]
        if tokens[:3] != ["context", str(a), str(b)] or len(tokens) != 4 or not tokens[3].startswith("n="):
            raise StrategySyntaxError(lineno, f"expected 'context {a} {b} n=<trials>'")
        per_context[a, b] = parse_int(tokens[3][2:], lineno)
        rows = []
        for lineno, tokens in lines[pos + 1 : pos + 1 + al.nX]:
            if len(tokens) != al.nY:
                raise StrategySyntaxError(lineno, f"expected {al.nY} counts")
            rows.append(tuple(parse_int(t, lineno) for t in tokens))
        if len(rows) != al.nX:
            raise StrategySyntaxError(lines[-1][0], f"context ({a},{b}) is truncated")
        if sum(map(sum, rows)) != per_context[a, b]:
            raise StrategySyntaxError(lineno, f"counts of context ({a},{b}) do not sum to n")
        counts[a, b] = tuple(rows)
        pos += 1 + al.nX
    if pos != len(lines):
        raise StrategySyntaxError(lines[pos][0], "trailing content")
    return EmpiricalTable(
        al,
        tuple(tuple(counts[a, b] for b in range(al.nB)) for a in range(al.nA)),
        tuple(tuple(per_context[a, b] for b in range(al.nB)) for a in range(al.nA)),
        seed,
        gen,
    )
