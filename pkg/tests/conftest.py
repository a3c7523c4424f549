import itertools
import random
from fractions import Fraction

import pytest

from nsctl.tables import Alphabets, ObservationPrior, Strategy


def random_distribution(rng, n, zero_prob=0.0, max_weight=12):
    """A random rational distribution on range(n); never all zero."""
    while True:
        w = [0 if rng.random() < zero_prob else rng.randint(1, max_weight) for _ in range(n)]
        if any(w):
            total = sum(w)
            return [Fraction(v, total) for v in w]


def random_alphabets(rng, max_size=3):
    return Alphabets(*(rng.randint(1, max_size) for _ in range(4)))


def random_strategy(rng, al):
    """Independent random distribution per context; signals with high probability."""
    blocks = {}
    for a, b in al.contexts():
        d = random_distribution(rng, al.nX * al.nY, zero_prob=0.3)
        blocks[a, b] = [d[x * al.nY:(x + 1) * al.nY] for x in range(al.nX)]
    return Strategy.from_function(al, lambda a, b, x, y: blocks[a, b][x][y])


def random_passive_strategy(rng, al, max_w=5):
    """Mixture of product strategies: no-signaling by construction."""
    nW = rng.randint(1, max_w)
    pw = random_distribution(rng, nW)
    px = [[random_distribution(rng, al.nX, 0.3) for _ in range(al.nA)] for _ in range(nW)]
    py = [[random_distribution(rng, al.nY, 0.3) for _ in range(al.nB)] for _ in range(nW)]
    return Strategy.from_function(
        al,
        lambda a, b, x, y: sum((pw[w] * px[w][a][x] * py[w][b][y] for w in range(nW)), Fraction(0)),
    )


def random_one_sided_strategy(rng, al):
    """Venkat's marginal ignores b, Vivek's generally depends on a."""
    px = [random_distribution(rng, al.nX, 0.3) for _ in range(al.nA)]
    py = {(a, b): random_distribution(rng, al.nY, 0.3) for a, b in al.contexts()}
    return Strategy.from_function(al, lambda a, b, x, y: px[a][x] * py[a, b][y])


def random_ns_mixture_binary(rng):
    """Convex mixture of binary NS vertices (local and PR boxes)."""
    pts = []
    for alpha, beta, gamma in itertools.product((0, 1), repeat=3):
        pts.append(lambda a, b, x, y, al=alpha, be=beta, ga=gamma:
                   Fraction(1, 2) if x ^ y == (a & b) ^ (al & a) ^ (be & b) ^ ga else Fraction(0))
    for f0, f1, g0, g1 in itertools.product((0, 1), repeat=4):
        pts.append(lambda a, b, x, y, f=(f0, f1), g=(g0, g1): Fraction(int(x == f[a] and y == g[b])))
    k = rng.randint(1, 4)
    picks = rng.sample(pts, k)
    w = random_distribution(rng, k)
    al = Alphabets(2, 2, 2, 2)
    return Strategy.from_function(
        al, lambda a, b, x, y: sum((wi * p(a, b, x, y) for wi, p in zip(w, picks)), Fraction(0))
    )


def random_full_support_prior(rng, nA, nB):
    d = random_distribution(rng, nA * nB)
    return ObservationPrior(nA, nB, [d[a * nB:(a + 1) * nB] for a in range(nA)])


def random_corpus(seed, size, max_size=3):
    """Mixed corpus of (strategy, full-support prior) pairs, alphabets <= max_size."""
    rng = random.Random(seed)
    out = []
    for i in range(size):
        kind = i % 4
        if kind == 3:
            s = random_ns_mixture_binary(rng)
        else:
            al = random_alphabets(rng, max_size)
            s = (random_strategy, random_passive_strategy, random_one_sided_strategy)[kind](rng, al)
        out.append((s, random_full_support_prior(rng, s.alphabets.nA, s.alphabets.nB)))
    return out


def brute_force_posteriors(s, p):
    """Bayes by enumeration: returns dicts of P(a|b,y), P(a|b), P(b|a,x), P(b|a)."""
    al = s.alphabets
    joint = {}
    for a, b, x, y in al.indices():
        joint[x, y, a, b] = s[a, b, x, y] * p[a, b]

    def P(pred):
        return sum((v for k, v in joint.items() if pred(*k)), Fraction(0))

    a_by, a_b, b_ax, b_a = {}, {}, {}, {}
    for a, b in al.contexts():
        pb = P(lambda x_, y_, a_, b_: b_ == b)
        pa = P(lambda x_, y_, a_, b_: a_ == a)
        a_b[a, b] = P(lambda x_, y_, a_, b_: a_ == a and b_ == b) / pb
        b_a[a, b] = P(lambda x_, y_, a_, b_: a_ == a and b_ == b) / pa
        for y in range(al.nY):
            den = P(lambda x_, y_, a_, b_: b_ == b and y_ == y)
            if den:
                a_by[a, b, y] = P(lambda x_, y_, a_, b_: a_ == a and b_ == b and y_ == y) / den
        for x in range(al.nX):
            den = P(lambda x_, y_, a_, b_: a_ == a and x_ == x)
            if den:
                b_ax[a, b, x] = P(lambda x_, y_, a_, b_: a_ == a and b_ == b and x_ == x) / den
    return a_by, a_b, b_ax, b_a


def brute_force_posterior_holds(s, p):
    a_by, a_b, b_ax, b_a = brute_force_posteriors(s, p)
    return all(v == a_b[a, b] for (a, b, _), v in a_by.items()) and all(
        v == b_a[a, b] for (a, b, _), v in b_ax.items()
    )


@pytest.fixture
def rng():
    return random.Random(20241016)
