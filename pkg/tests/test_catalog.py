from fractions import Fraction as F

import pytest

from nsctl.catalog import EXAMPLE_NAMES, NS_LOCAL, NS_NOT_LOCAL, SIGNALING, get_example
from nsctl.errors import UnknownExample
from nsctl.fileformat import emit_strategy, parse_strategy
from nsctl.tables import Strategy
from nsctl.verify import classify


def test_names():
    assert set(EXAMPLE_NAMES) == {"ab3", "binary2", "pr-box", "uniform"}
    with pytest.raises(UnknownExample):
        get_example("nope")


@pytest.mark.parametrize("name", EXAMPLE_NAMES)
def test_classification_matches_expectation(name):
    ex = get_example(name)
    assert classify(ex.strategy) == ex.expected_classification
    assert ex.prior.is_uniform


@pytest.mark.parametrize("name", EXAMPLE_NAMES)
def test_round_trip_through_text(name):
    s = get_example(name).strategy
    assert parse_strategy(emit_strategy(s))[0] == s


def test_ab3_entries():
    s = get_example("ab3").strategy
    assert s.alphabets.as_tuple() == (2, 2, 3, 3)
    t = F(1, 3)
    assert s.block(1, 1) == ((t, 0, 0), (0, t, 0), (0, 0, t))
    assert s.block(0, 0) == ((0, 0, t), (0, t, 0), (t, 0, 0))
    assert not get_example("ab3").prior_assumed


def test_binary2_entries():
    s = get_example("binary2").strategy
    assert s.block(0, 0) == ((F(1, 2), 0), (F(1, 3), F(1, 6)))
    assert s.block(1, 1) == ((0, F(1, 2)), (F(1, 2), 0))
    assert get_example("binary2").prior_assumed


def test_signaling_classification():
    s = Strategy.from_function(get_example("uniform").strategy.alphabets,
                               lambda a, b, x, y: F(int(x == b and y == 0)))
    assert classify(s) == SIGNALING
    assert NS_LOCAL != NS_NOT_LOCAL
