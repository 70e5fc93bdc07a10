import pytest
from hypothesis import given, settings, strategies

from dmcount.services.abelian import GroupType, PPartition
from dmcount.utils.errors import GroupSpecError
from dmcount.utils.spec_parser import (
    GroupSpecParser,
    TokenType,
    format_group_type,
    format_partition,
    parse_group_spec,
    read_group_spec,
)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("Z4xZ8", {2: (2, 3)}),
        ("Z2^2 x Z3^2", {2: (1, 1), 3: (1, 1)}),
        ("Z12", {2: (2,), 3: (1,)}),
        ("z2 * Z4 ^3", {2: (1, 2, 2, 2)}),
        ("Z1", {}),
        ("Z1 x Z6^2", {2: (1, 1), 3: (1, 1)}),
        ("Z30", {2: (1,), 3: (1,), 5: (1,)}),
        ("Z2 ^ 2", {2: (1, 1)}),
        ("Z 4", {2: (2,)}),
        (" z 3 ^2 x Z 9 ", {3: (1, 1, 2)}),
    ],
)
def test_parse_group_spec(text, expected):
    assert parse_group_spec(text) == GroupType.of(expected)


@pytest.mark.parametrize(
    "text",
    ["", "   ", "Z0", "Z4xx Z2", "Z4 Z2", "Z4x", "x Z4", "Q8", "Z4^", "Z18446744073709551616", "Z-4"],
)
def test_parse_group_spec_rejects(text):
    with pytest.raises(GroupSpecError):
        parse_group_spec(text)


def test_tokenize():
    tokens = GroupSpecParser().tokenize("Z2^2 x Z9")
    assert [t.type for t in tokens] == [TokenType.CYCLIC, TokenType.POWER, TokenType.TIMES, TokenType.CYCLIC]
    assert [t.value for t in tokens] == ["2", "2", "x", "9"]
    assert tokens[-1].position == 7


def test_tokenize_spaces_inside_factor():
    tokens = GroupSpecParser().tokenize("Z 4 ^ 2")
    assert [(t.type, t.value, t.position) for t in tokens] == [
        (TokenType.CYCLIC, "4", 0),
        (TokenType.POWER, "2", 4),
    ]


def test_format_partition():
    assert format_partition(PPartition(2, (1, 1, 2))) == "Z2^2 x Z4"
    assert format_partition(PPartition(3, (2,))) == "Z9"


def test_format_group_type():
    assert format_group_type(GroupType()) == "Z1"
    assert format_group_type(GroupType.of({3: (1,), 2: (1, 1, 2)})) == "Z2^2 x Z4 x Z3"


def test_read_group_spec():
    spec = read_group_spec("Z6 x Z2")
    assert spec.source == "Z6 x Z2"
    assert spec.canonical == "Z2^2 x Z3"


partitions = strategies.lists(strategies.integers(min_value=1, max_value=6), min_size=1, max_size=5)


@strategies.composite
def group_types(draw):
    primes = draw(strategies.sets(strategies.sampled_from([2, 3, 5, 7, 11, 13]), max_size=3))
    return GroupType.of({p: sorted(draw(partitions)) for p in primes})


@settings(max_examples=1000)
@given(group_types())
def test_format_then_parse_is_identity(t):
    assert parse_group_spec(format_group_type(t)) == t


@given(strategies.lists(strategies.integers(min_value=1, max_value=10**6), min_size=1, max_size=4))
def test_order_is_product_of_moduli(moduli):
    t = parse_group_spec(" x ".join(f"Z{m}" for m in moduli))
    expected = 1
    for m in moduli:
        expected *= m
    assert t.order == expected
