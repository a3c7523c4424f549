from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from nsctl.catalog import BINARY2_BLOCKS, get_example
from nsctl.errors import ContextNotNormalized, MissingContext, StrategySyntaxError
from nsctl.fileformat import emit_strategy, parse_strategy
from nsctl.tables import ObservationPrior, Strategy

from test_tables import strategies

BINARY2_TEXT = """\
# binary no-signaling, non-local
alphabets 2 2 2 2
prior uniform
context 0 0
1/2 0
1/3 1/6
context 0 1
1/2 0
0 1/2
context 1 0
1/2 0
1/3 1/6
context 1 1
0 1/2   # anti-diagonal
1/2 0
"""


def test_parse_binary2():
    s, prior = parse_strategy(BINARY2_TEXT)
    assert prior is None
    assert s == Strategy.from_blocks(BINARY2_BLOCKS)


def test_emit_binary2_lines():
    text = emit_strategy(get_example("binary2").strategy)
    lines = text.splitlines()
    i = lines.index("context 0 0")
    assert lines[i + 1 : i + 3] == ["1/2 0", "1/3 1/6"]
    assert lines[:2] == ["alphabets 2 2 2 2", "prior uniform"]


def test_integers_without_denominator():
    text = emit_strategy(get_example("pr-box").strategy)
    assert "1/1" not in text and "0/1" not in text
    s = Strategy.from_function(get_example("pr-box").strategy.alphabets,
                               lambda a, b, x, y: F(int(x == 0 and y == 0)))
    assert "\n1 0\n0 0\n" in emit_strategy(s)


def test_emit_parse_is_normalizing():
    unreduced = BINARY2_TEXT.replace("1/2 0\n1/3 1/6", "2/4 0\n2/6 3/18", 1)
    s, _ = parse_strategy(unreduced)
    assert emit_strategy(s) == emit_strategy(parse_strategy(BINARY2_TEXT)[0])


def test_missing_context():
    text = BINARY2_TEXT.split("context 1 1")[0]
    with pytest.raises(MissingContext) as exc:
        parse_strategy(text)
    assert (exc.value.a, exc.value.b) == (1, 1)


@pytest.mark.parametrize(
    "mutation, line",
    [
        (("alphabets 2 2 2 2", "alphabet 2 2 2 2"), 2),
        (("prior uniform", "prior flat"), 3),
        (("1/3 1/6", "1/3 x"), 6),
        (("1/3 1/6", "1/3 1/0"), 6),
        (("1/3 1/6", "1/3 1/6 0"), 6),
        (("context 0 1", "context 0 0"), 7),
        (("context 0 1", "context 0 5"), 7),
    ],
)
def test_syntax_errors_carry_line(mutation, line):
    text = BINARY2_TEXT.replace(*mutation, 1)
    with pytest.raises(StrategySyntaxError) as exc:
        parse_strategy(text)
    assert exc.value.line == line


def test_truncated_block():
    with pytest.raises(StrategySyntaxError):
        parse_strategy("alphabets 1 1 2 2\nprior uniform\ncontext 0 0\n1/2 1/2\n")


def test_validation_errors_propagate():
    text = BINARY2_TEXT.replace("1/3 1/6", "1/3 0", 1)
    with pytest.raises(ContextNotNormalized):
        parse_strategy(text)


def test_prior_table_round_trip():
    s = get_example("binary2").strategy
    prior = ObservationPrior(2, 2, [[F(1, 2), F(1, 6)], [F(1, 6), F(1, 6)]])
    text = emit_strategy(s, prior)
    assert "prior table\n1/2 1/6\n1/6 1/6\n" in text
    assert parse_strategy(text) == (s, prior)


@settings(max_examples=200, deadline=None)
@given(strategies())
def test_round_trip(s):
    text = emit_strategy(s)
    parsed, prior = parse_strategy(text)
    assert parsed == s and prior is None
    assert emit_strategy(parsed) == text
