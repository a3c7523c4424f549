"""No-signaling, posterior and passivity checks.

All verdicts come from exact rational comparisons. The conditional mutual
information is a float for reporting only.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import AlphabetMismatch, DegeneratePrior, ShapeError, ValidationError
from .tables import (
    VENKAT,
    VIVEK,
    JointDistribution,
    ObservationPrior,
    Strategy,
    _freeze,
    action_marginal,
    joint_from_prior,
)


@dataclass(frozen=True)
class Violation:
    """One failed equality ``lhs == rhs``.

    For no-signaling records ``other`` is the alternative observation of
    the *other* agent (b' for Venkat, a' for Vivek). Posterior records
    leave it ``None``.
    """

    side: str
    a: int
    b: int
    other: int | None
    action: int
    lhs: Fraction
    rhs: Fraction


@dataclass(frozen=True)
class NsReport:
    violations: tuple = field(default=())

    @property
    def holds(self) -> bool:
        return not self.violations

    def side_holds(self, side: str) -> bool:
        return not any(v.side == side for v in self.violations)


def check_no_signaling(s: Strategy) -> NsReport:
    al = s.alphabets
    violations = []
    for a in range(al.nA):
        for b, b_alt in itertools.combinations(range(al.nB), 2):
            m, m_alt = action_marginal(s, VENKAT, a, b), action_marginal(s, VENKAT, a, b_alt)
            for x in range(al.nX):
                if m[x] != m_alt[x]:
                    violations.append(Violation(VENKAT, a, b, b_alt, x, m[x], m_alt[x]))
    for b in range(al.nB):
        for a, a_alt in itertools.combinations(range(al.nA), 2):
            m, m_alt = action_marginal(s, VIVEK, a, b), action_marginal(s, VIVEK, a_alt, b)
            for y in range(al.nY):
                if m[y] != m_alt[y]:
                    violations.append(Violation(VIVEK, a, b, a_alt, y, m[y], m_alt[y]))
    return NsReport(tuple(violations))


def check_posterior(s: Strategy, p: ObservationPrior) -> NsReport:
    """Compare ``P(a | b, y)`` with ``P(a | b)`` and ``P(b | a, x)`` with ``P(b | a)``.

    Events of probability zero are skipped. A zero marginal ``P(a)`` or
    ``P(b)`` leaves a required conditional undefined and raises
    ``DegeneratePrior``.

    Violations on Vivek's side are about his posterior on ``a``; they are
    recorded with ``action = y``.
    """
    al = s.alphabets
    j = joint_from_prior(s, p)
    pa = p.marginal_a()
    pb = p.marginal_b()
    for a, v in enumerate(pa):
        if v == 0:
            raise DegeneratePrior("a", a)
    for b, v in enumerate(pb):
        if v == 0:
            raise DegeneratePrior("b", b)

    violations = []
    # P(b, y) and P(a, x)
    p_by = {
        (b, y): sum(j[x, y, a, b] for x in range(al.nX) for a in range(al.nA))
        for b in range(al.nB) for y in range(al.nY)
    }
    p_ax = {
        (a, x): sum(j[x, y, a, b] for y in range(al.nY) for b in range(al.nB))
        for a in range(al.nA) for x in range(al.nX)
    }
    for b in range(al.nB):
        for y in range(al.nY):
            if p_by[b, y] == 0:
                continue
            for a in range(al.nA):
                lhs = sum(j[x, y, a, b] for x in range(al.nX)) / p_by[b, y]
                rhs = p[a, b] / pb[b]
                if lhs != rhs:
                    violations.append(Violation(VIVEK, a, b, None, y, lhs, rhs))
    for a in range(al.nA):
        for x in range(al.nX):
            if p_ax[a, x] == 0:
                continue
            for b in range(al.nB):
                lhs = sum(j[x, y, a, b] for y in range(al.nY)) / p_ax[a, x]
                rhs = p[a, b] / pa[a]
                if lhs != rhs:
                    violations.append(Violation(VENKAT, a, b, None, x, lhs, rhs))
    return NsReport(tuple(violations))


def posterior_iff_ns(s: Strategy, p: ObservationPrior) -> bool:
    if not p.has_full_support:
        raise ValidationError("posterior_iff_ns needs a prior with full support")
    return check_no_signaling(s).holds == check_posterior(s, p).holds


X_B_GIVEN_A = "X;B|A"
Y_A_GIVEN_B = "Y;A|B"


def conditional_mutual_information(j: JointDistribution, which: str = X_B_GIVEN_A) -> float:
    """``I(X;B|A)`` or ``I(Y;A|B)`` in nats, with ``0 log 0 = 0``."""
    al = j.alphabets
    # reduce to P(u, v, c) for I(U;V|C)
    if which == X_B_GIVEN_A:
        nU, nV, nC = al.nX, al.nB, al.nA
        def mass(u, v, c):
            return sum(j[u, y, c, v] for y in range(al.nY))
    elif which == Y_A_GIVEN_B:
        nU, nV, nC = al.nY, al.nA, al.nB
        def mass(u, v, c):
            return sum(j[x, u, v, c] for x in range(al.nX))
    else:
        raise ValueError(f"which must be {X_B_GIVEN_A!r} or {Y_A_GIVEN_B!r}")

    puvc = {(u, v, c): mass(u, v, c) for u in range(nU) for v in range(nV) for c in range(nC)}
    pc = [sum(puvc[u, v, c] for u in range(nU) for v in range(nV)) for c in range(nC)]
    puc = {(u, c): sum(puvc[u, v, c] for v in range(nV)) for u in range(nU) for c in range(nC)}
    pvc = {(v, c): sum(puvc[u, v, c] for u in range(nU)) for v in range(nV) for c in range(nC)}

    total = 0.0
    for (u, v, c), q in puvc.items():
        if q == 0:
            continue
        ratio = q * pc[c] / (puc[u, c] * pvc[v, c])
        total += float(q) * math.log(ratio)
    return total


def factorizes(j: JointDistribution, which: str = X_B_GIVEN_A) -> bool:
    """Exact test of ``P(u | v, c) = P(u | c)`` on the support of ``(v, c)``."""
    al = j.alphabets
    if which == X_B_GIVEN_A:
        nU, nV, nC = al.nX, al.nB, al.nA
        def mass(u, v, c):
            return sum(j[u, y, c, v] for y in range(al.nY))
    elif which == Y_A_GIVEN_B:
        nU, nV, nC = al.nY, al.nA, al.nB
        def mass(u, v, c):
            return sum(j[x, u, v, c] for x in range(al.nX))
    else:
        raise ValueError(f"which must be {X_B_GIVEN_A!r} or {Y_A_GIVEN_B!r}")
    for c in range(nC):
        pc = sum(mass(u, v, c) for u in range(nU) for v in range(nV))
        if pc == 0:
            continue
        for v in range(nV):
            pvc = sum(mass(u, v, c) for u in range(nU))
            if pvc == 0:
                continue
            for u in range(nU):
                puc = sum(mass(u, vv, c) for vv in range(nV))
                if mass(u, v, c) / pvc != puc / pc:
                    return False
    return True


@dataclass(frozen=True)
class WJoint:
    """``P(w, a, b)`` indexed ``[w][a][b]``."""

    nW: int
    nA: int
    nB: int
    table: tuple

    def __post_init__(self):
        if self.nW < 1:
            raise ShapeError("nW must be positive")
        table = _freeze(self.table, (self.nW, self.nA, self.nB))
        object.__setattr__(self, "table", table)
        flat = [v for plane in table for row in plane for v in row]
        if any(v < 0 for v in flat):
            raise ValidationError("WJoint has a negative entry")
        if sum(flat) != 1:
            raise ValidationError(f"WJoint sums to {sum(flat)}, not 1")

    def __getitem__(self, idx):
        w, a, b = idx
        return self.table[w][a][b]


def is_passive(wj: WJoint) -> tuple[bool, tuple[int, int, int] | None]:
    """Check ``P(w, a, b) = P(w) P(a, b)`` exactly.

    Returns the verdict and, when it fails, the triple with the largest
    absolute discrepancy (first one in (w, a, b) order on ties).
    """
    pw = [sum(v for row in plane for v in row) for plane in wj.table]
    pab = [[sum(wj[w, a, b] for w in range(wj.nW)) for b in range(wj.nB)] for a in range(wj.nA)]
    worst, worst_gap = None, Fraction(0)
    for w in range(wj.nW):
        for a in range(wj.nA):
            for b in range(wj.nB):
                gap = abs(wj[w, a, b] - pw[w] * pab[a][b])
                if gap > worst_gap:
                    worst, worst_gap = (w, a, b), gap
    return worst is None, worst


def mutual_information_w_ab(wj: WJoint) -> float:
    """``I(W; A, B)`` in nats. Zero exactly when ``W`` is passive."""
    pw = [sum(v for row in plane for v in row) for plane in wj.table]
    pab = [[sum(wj[w, a, b] for w in range(wj.nW)) for b in range(wj.nB)] for a in range(wj.nA)]
    total = 0.0
    for w in range(wj.nW):
        for a in range(wj.nA):
            for b in range(wj.nB):
                q = wj[w, a, b]
                if q:
                    total += float(q) * math.log(q / (pw[w] * pab[a][b]))
    return total


def wjoint_from_prior(p_w_given_ab, prior: ObservationPrior) -> WJoint:
    """Combine ``P(w | a, b)`` (indexed ``[a][b][w]``) with a prior."""
    nA, nB = prior.nA, prior.nB
    if len(p_w_given_ab) != nA or any(len(r) != nB for r in p_w_given_ab):
        raise AlphabetMismatch((len(p_w_given_ab), len(p_w_given_ab[0])), (nA, nB))
    nW = len(p_w_given_ab[0][0])
    table = [
        [[Fraction(p_w_given_ab[a][b][w]) * prior[a, b] for b in range(nB)] for a in range(nA)]
        for w in range(nW)
    ]
    return WJoint(nW, nA, nB, table)
