import itertools
import random
from fractions import Fraction as F

import pytest

from nsctl.bell import ALL_VARIANTS, chsh_value
from nsctl.catalog import get_example
from nsctl.errors import CapExceeded, StrategySyntaxError
from nsctl.mechanisms import induce_passive
from nsctl.nosignaling import check_no_signaling
from nsctl.polytope import (
    DeterministicLocal,
    LocalDecomposition,
    binary_local_vertices,
    binary_nonlocal_vertices,
    decomposition_to_mechanism,
    deterministic_count,
    emit_functional,
    enumerate_deterministic,
    evaluate_functional,
    induce_deterministic,
    local_membership,
    parse_functional,
)
from nsctl.tables import BINARY, Alphabets

from conftest import random_distribution, random_strategy


def test_counts():
    assert len(enumerate_deterministic(BINARY)) == 16
    assert len(enumerate_deterministic(Alphabets(2, 2, 3, 3))) == 81
    assert len(enumerate_deterministic(Alphabets(3, 2, 1, 1))) == 1
    assert deterministic_count(Alphabets(3, 3, 3, 3)) == 729


def test_cap_exceeded():
    with pytest.raises(CapExceeded) as exc:
        enumerate_deterministic(Alphabets(3, 3, 3, 3), cap=100)
    assert (exc.value.count, exc.value.cap) == (729, 100)


def test_enumeration_is_lexicographic_and_distinct():
    dets = enumerate_deterministic(Alphabets(2, 2, 3, 2))
    keys = [(d.f, d.g) for d in dets]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)


def test_induce_deterministic():
    s = induce_deterministic(DeterministicLocal(BINARY, (0, 1), (1, 1)))
    assert s[1, 0, 1, 1] == 1 and s[1, 0, 0, 1] == 0
    assert sum(s.flat()) == 4


def test_bad_response_function():
    with pytest.raises(ValueError):
        DeterministicLocal(BINARY, (0, 2), (0, 0))


def _exhaustive_max(c):
    # oracle: itertools over response functions, evaluated via the coefficient accessor
    al = c.alphabets
    best = None
    for f in itertools.product(range(al.nX), repeat=al.nA):
        for g in itertools.product(range(al.nY), repeat=al.nB):
            v = sum(c.coefficient(a, b, f[a], g[b]) for a in range(al.nA) for b in range(al.nB))
            best = v if best is None else max(best, v)
    return best


@pytest.mark.parametrize("name", ["ab3", "binary2", "pr-box"])
def test_nonlocal_examples_certified(name):
    s = get_example(name).strategy
    res = local_membership(s)
    assert not res.feasible and res.decomposition is None
    c = res.certificate
    assert all(k.denominator == 1 for k in c.coeffs)
    assert evaluate_functional(c, s) == c.value_on_strategy
    assert _exhaustive_max(c) == c.max_on_local
    assert c.separates


def test_uniform_is_local():
    s = get_example("uniform").strategy
    res = local_membership(s)
    assert res.feasible and res.certificate is None
    assert res.decomposition.reconstruct() == s


def test_decomposition_to_mechanism_single_atom():
    d = DeterministicLocal(BINARY, (1, 0), (0, 0))
    m = decomposition_to_mechanism(LocalDecomposition(((F(1), d),)))
    assert m.p_w == (1,)
    assert induce_passive(m) == induce_deterministic(d)


def test_decomposition_to_mechanism_two_atoms():
    d1 = DeterministicLocal(BINARY, (0, 0), (0, 0))
    d2 = DeterministicLocal(BINARY, (1, 1), (1, 1))
    dec = LocalDecomposition(((F(1, 2), d1), (F(1, 2), d2)))
    m = decomposition_to_mechanism(dec)
    assert m.p_w == (F(1, 2), F(1, 2))
    assert induce_passive(m) == dec.reconstruct()


def test_decomposition_rejects_bad_weights():
    d = DeterministicLocal(BINARY, (0, 0), (0, 0))
    with pytest.raises(ValueError):
        LocalDecomposition(((F(1, 2), d),))
    with pytest.raises(ValueError):
        LocalDecomposition(())


def test_binary_vertices():
    local = binary_local_vertices()
    nonlocal_ = binary_nonlocal_vertices()
    assert len(local) == 16 and len(nonlocal_) == 8
    strategies = [s for _, s in local + nonlocal_]
    assert len(set(strategies)) == 24
    for _, s in local:
        assert set(s.flat()) == {0, 1}
        assert local_membership(s).feasible
    for _, s in nonlocal_:
        assert set(s.flat()) == {0, F(1, 2)}
        assert check_no_signaling(s).holds
        assert not local_membership(s).feasible


def test_local_vertex_labels_match_affine_maps():
    for (alpha, beta, gamma, delta), s in binary_local_vertices():
        for a, b in BINARY.contexts():
            assert s[a, b, (alpha * a) ^ beta, (gamma * b) ^ delta] == 1


def test_random_mixtures_reconstruct():
    rng = random.Random(99)
    shapes = [BINARY, Alphabets(2, 2, 3, 3), Alphabets(2, 2, 2, 3), Alphabets(1, 2, 3, 2)]
    for i in range(1000):
        al = shapes[i % len(shapes)]
        dets = enumerate_deterministic(al)
        picks = rng.sample(dets, rng.randint(1, 4))
        w = random_distribution(rng, len(picks))
        s = LocalDecomposition(tuple(zip(w, picks))).reconstruct()
        res = local_membership(s)
        assert res.feasible
        assert res.decomposition.reconstruct() == s


def test_feasible_implies_no_signaling():
    rng = random.Random(7)
    for _ in range(200):
        al = Alphabets(*(rng.randint(1, 2) for _ in range(2)), *(rng.randint(1, 3) for _ in range(2)))
        s = random_strategy(rng, al)
        res = local_membership(s)
        if res.feasible:
            assert check_no_signaling(s).holds
        else:
            assert res.certificate.separates
            assert _exhaustive_max(res.certificate) == res.certificate.max_on_local


def test_local_mixtures_obey_chsh():
    for _, s in binary_local_vertices():
        assert all(chsh_value(s, v) <= 2 for v in ALL_VARIANTS)


def test_functional_round_trip():
    c = local_membership(get_example("binary2").strategy).certificate
    text = emit_functional(c)
    assert text.startswith("functional 2 2 2 2\n")
    assert parse_functional(text) == c


def test_functional_parse_errors():
    with pytest.raises(StrategySyntaxError):
        parse_functional("")
    with pytest.raises(StrategySyntaxError):
        parse_functional("functional 1 1 1 1\n3\nvalue 3\n")
    with pytest.raises(StrategySyntaxError):
        parse_functional("functional 1 1 1 1\n3\nvalue 3\nvalue 2\n")
