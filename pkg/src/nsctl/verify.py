"""Self-check suite behind ``nsctl verify-paper``.

Each check returns ``(name, passed, detail)``; nothing here is trusted by
the test suite, which re-derives every expectation independently.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .bell import ALL_VARIANTS, ChshVariant, chsh_value, correlator
from .catalog import (
    EXAMPLE_NAMES,
    NS_LOCAL,
    NS_NOT_LOCAL,
    ONE_WAY_TABLE,
    SIGNALING,
    get_example,
)
from .mechanisms import (
    OneWayProtocol,
    active_wjoint,
    empirical_tv,
    induce_active,
    one_way_protocol,
    paper_active_mechanism,
    simulate,
)
from .nosignaling import (
    X_B_GIVEN_A,
    Y_A_GIVEN_B,
    check_no_signaling,
    check_posterior,
    conditional_mutual_information,
    is_passive,
)
from .polytope import (
    binary_local_vertices,
    binary_nonlocal_vertices,
    enumerate_deterministic,
    induce_deterministic,
    local_membership,
    max_over_locals,
)
from .tables import BINARY, ObservationPrior, Strategy, joint_from_prior

SIM_TRIALS = 200_000
SIM_SEEDS = (7, 2024)
TV_TOL = 0.01


def _certificate_ok(s: Strategy) -> tuple[bool, str]:
    r = local_membership(s)
    if r.feasible:
        return False, "feasible"
    c = r.certificate
    local_max = max_over_locals(c.coeffs, s.alphabets)
    ok = local_max == c.max_on_local and c.value_on_strategy > local_max
    return ok, f"value {c.value_on_strategy} > localmax {local_max}"


def check_ns_examples():
    for name in ("ab3", "binary2"):
        rep = check_no_signaling(get_example(name).strategy)
        yield f"no-signaling {name}", rep.holds, f"{len(rep.violations)} violations"


def check_nonmembership():
    for name in ("ab3", "binary2"):
        ok, detail = _certificate_ok(get_example(name).strategy)
        yield f"outside local polytope {name}", ok, detail


def check_chsh_numbers():
    s = get_example("binary2").strategy
    corr = tuple(correlator(s, a, b) for a, b in BINARY.contexts())
    want = (Fraction(1, 3), Fraction(1), Fraction(1, 3), Fraction(-1))
    yield "correlators binary2", corr == want, " ".join(map(str, corr))
    value = chsh_value(s, ChshVariant(0, 0, 0))
    yield "chsh binary2", value == Fraction(8, 3), f"value {value}"


def check_vertices():
    local = binary_local_vertices()
    nonlocal_ = binary_nonlocal_vertices()
    yield "vertex counts", (len(local), len(nonlocal_)) == (16, 8), f"{len(local)} local, {len(nonlocal_)} non-local"
    ok = True
    for _, s in local:
        r = local_membership(s)
        ok &= r.feasible and len(r.decomposition.atoms) == 1
        ok &= all(chsh_value(s, v) <= 2 for v in ALL_VARIANTS)
    yield "local vertices feasible and CHSH <= 2", ok, ""
    ok = True
    for label, s in nonlocal_:
        ok &= not local_membership(s).feasible
        ok &= chsh_value(s, ChshVariant(*label)) == 4
    yield "non-local vertices infeasible and CHSH = 4", ok, ""


def check_active():
    m = paper_active_mechanism()
    target = get_example("binary2").strategy
    yield "active mechanism reproduces binary2", induce_active(m) == target, ""
    passive, worst = is_passive(active_wjoint(m, ObservationPrior.uniform(2, 2)))
    yield "active common randomness is not passive", not passive, f"worst (w,a,b) index {worst}"


def check_one_way():
    mixed, per_w = one_way_protocol()
    yield "one-way protocol reproduces binary2", mixed == get_example("binary2").strategy, ""
    ok = all(per_w[w] == Strategy.from_blocks(ONE_WAY_TABLE[w]) for w in (1, 2))
    yield "one-way tables for w=1,2", ok, ""
    half = Fraction(1, 2)
    ok = all(
        per_w[3][a, b, x, y] == (half if (x ^ y) == (a & b) else 0)
        for a, b, x, y in BINARY.indices()
    )
    yield "one-way table for w=3", ok, ""


def _signaling_example() -> Strategy:
    return Strategy.from_function(BINARY, lambda a, b, x, y: Fraction(int(x == b and y == 0)))


def check_posterior_and_cmi():
    prior = ObservationPrior.uniform(2, 2)
    cases = [(n, get_example(n).strategy) for n in ("ab3", "binary2", "pr-box", "uniform")]
    cases.append(("x-copies-b", _signaling_example()))
    ok = True
    for name, s in cases:
        p = ObservationPrior.uniform(s.alphabets.nA, s.alphabets.nB)
        ok &= check_no_signaling(s).holds == check_posterior(s, p).holds
    yield "posterior condition matches no-signaling", ok, f"{len(cases)} strategies"
    j = joint_from_prior(get_example("binary2").strategy, prior)
    cmi = max(conditional_mutual_information(j, X_B_GIVEN_A), conditional_mutual_information(j, Y_A_GIVEN_B))
    yield "conditional mutual information binary2", cmi < 1e-12, f"{cmi:.12g} nats"


def check_local_soundness(samples: int = 200, seed: int = 1):
    rng = random.Random(seed)
    dets = [induce_deterministic(d) for d in enumerate_deterministic(BINARY)]
    ok = True
    for _ in range(samples):
        k = rng.randint(1, 6)
        picks = rng.sample(range(len(dets)), k)
        weights = [rng.randint(1, 20) for _ in picks]
        total = sum(weights)
        s = Strategy.from_function(
            BINARY,
            lambda a, b, x, y: sum(
                (Fraction(w, total) * dets[j][a, b, x, y] for j, w in zip(picks, weights)),
                Fraction(0),
            ),
        )
        r = local_membership(s)
        ok &= r.feasible and r.decomposition.reconstruct() == s
        ok &= all(chsh_value(s, v) <= 2 for v in ALL_VARIANTS)
    yield "random local mixtures feasible, exact, CHSH <= 2", ok, f"{samples} samples"


def check_simulation():
    prior = ObservationPrior.uniform(2, 2)
    target = get_example("binary2").strategy
    for label, source in (("paper-active", paper_active_mechanism()), ("one-way", OneWayProtocol())):
        runs = {}
        for seed in SIM_SEEDS:
            runs[seed] = simulate(source, prior, SIM_TRIALS, seed)
            _, worst = empirical_tv(runs[seed], target)
            yield f"simulate {label} seed={seed}", worst <= TV_TOL, f"max TV {worst:.12g}"
        again = simulate(source, prior, SIM_TRIALS, SIM_SEEDS[0])
        yield f"simulate {label} reproducible", again == runs[SIM_SEEDS[0]], ""


def classify(s: Strategy) -> str:
    if not check_no_signaling(s).holds:
        return SIGNALING
    return NS_LOCAL if local_membership(s).feasible else NS_NOT_LOCAL


def check_catalog():
    for name in EXAMPLE_NAMES:
        ex = get_example(name)
        got = classify(ex.strategy)
        yield f"catalog {name} classification", got == ex.expected_classification, got


ALL_CHECKS = (
    check_ns_examples,
    check_nonmembership,
    check_chsh_numbers,
    check_vertices,
    check_active,
    check_one_way,
    check_posterior_and_cmi,
    check_local_soundness,
    check_simulation,
    check_catalog,
)


def run_all():
    for group in ALL_CHECKS:
        yield from group()
