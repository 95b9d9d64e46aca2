import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dicelang import parse, unparse
from dicelang.errors import (DiceError, EmptyRange, MissingSides, MixedFaces,
                             NegativeKeepCount, NegativeSides, ParseError)
from dicelang.nodes import (BinaryMath, Coin, Condition, Count, DiceNode,
                            DiceOpNode, Explode, Fate, Filter, Group,
                            IntLiteral, KeepDrop, MacroAccess,
                            MacroDefinition, NumericFaces, Percent, Reroll,
                            Seq, StandardSides, SymbolicFaces, Unique,
                            UnaryNegate, expand_special)


def expr(source):
    statements = parse(source).statements
    assert len(statements) == 1
    return statements[0]


def test_minimal_dice():
    assert expr("1d1") == DiceNode(IntLiteral(1), StandardSides(1))


def test_count_defaults_to_one():
    assert expr("d6") == DiceNode(None, StandardSides(6))


def test_negative_sides_is_an_error():
    with pytest.raises(NegativeSides):
        parse("d-6")
    with pytest.raises(NegativeSides):
        parse("d0")


def test_middle_die_via_chained_drops():
    node = expr("3d6dldh")
    assert node == DiceOpNode(
        DiceOpNode(DiceNode(IntLiteral(3), StandardSides(6)),
                   KeepDrop("drop", "low", 1)),
        KeepDrop("drop", "high", 1))


def test_keep_drop_z_argument():
    assert expr("2d6kh3").op == KeepDrop("keep", "high", 3)
    assert expr("4d6kl2").op == KeepDrop("keep", "low", 2)
    with pytest.raises(ParseError):
        parse("2d6kh0")


def test_negative_keep_count_is_ambiguous():
    with pytest.raises(NegativeKeepCount):
        parse("2d6kh-1")
    # With whitespace the minus is ordinary subtraction.
    node = expr("2d6kh - 1")
    assert isinstance(node, BinaryMath) and node.op == "-"


def test_keep_requires_high_or_low():
    with pytest.raises(ParseError):
        parse("2d6k3")
    with pytest.raises(ParseError):
        parse("2d6k h")  # whitespace inside the operator


def test_macro_definition_and_access():
    statements = parse(
        "#SUITS = d{CLUBS,HEARTS,DIAMONDS,SPADES};@SUITS").statements
    assert statements[0] == MacroDefinition(
        "SUITS",
        DiceNode(None, SymbolicFaces(
            ("CLUBS", "HEARTS", "DIAMONDS", "SPADES"))))
    assert statements[1] == MacroAccess("SUITS")


def test_precedence_dice_ops_before_math():
    node = expr("2d20kh+2")
    assert isinstance(node, BinaryMath) and node.op == "+"
    assert isinstance(node.lhs, DiceOpNode)
    assert node.rhs == IntLiteral(2)


def test_precedence_multiplication_before_addition():
    node = expr("1+2*3")
    assert node == BinaryMath(
        "+", IntLiteral(1),
        BinaryMath("*", IntLiteral(2), IntLiteral(3)))


def test_unary_minus_binds_looser_than_dice():
    node = expr("-1d6")
    assert node == UnaryNegate(DiceNode(IntLiteral(1), StandardSides(6)))


def test_parenthesized_sequence():
    node = expr("(d6;d6)-3")
    assert isinstance(node.lhs, Group)
    assert isinstance(node.lhs.child, Seq)
    assert len(node.lhs.child.items) == 2


def test_group_as_dice_count():
    node = expr("(1+2)d4")
    assert isinstance(node, DiceNode)
    assert isinstance(node.count, Group)
    assert node.faces == StandardSides(4)


def test_group_then_drop_is_an_operator_not_sides():
    node = expr("(2d6)dh")
    assert isinstance(node, DiceOpNode)
    assert node.op == KeepDrop("drop", "high", 1)


def test_range_faces_expand_inclusively():
    node = expr("d{1,2,3..8,9,10,100}")
    assert node.faces == NumericFaces((1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 100))


def test_empty_range_rejected():
    with pytest.raises(EmptyRange):
        parse("d{8..3}")


def test_mixed_faces_rejected():
    with pytest.raises(MixedFaces):
        parse("d{1,FOO}")


def test_missing_sides_strict_and_lenient():
    with pytest.raises(MissingSides):
        parse("2d")
    node = parse("2d", default_sides=6).statements[0]
    assert node.faces == StandardSides(6)
    assert node.faces.defaulted


def test_special_shorthands():
    assert expr("d%").faces == Percent()
    assert expr("df").faces == Fate()
    assert expr("c") == DiceNode(None, Coin())
    assert expr("3c") == DiceNode(IntLiteral(3), Coin())


def test_expand_special():
    assert expand_special(Percent()) == StandardSides(100)
    assert expand_special(Coin()) == SymbolicFaces(("HEADS", "TAILS"))
    assert expand_special(Fate()) == SymbolicFaces(
        ("-", "-", "0", "0", "+", "+"))


def test_reroll_and_explode_variants():
    assert expr("1d6r<2").op == Reroll(Condition("<", 2), False)
    assert expr("1d6rr<2").op == Reroll(Condition("<", 2), True)
    assert expr("1d6!").op == Explode("plain")
    assert expr("1d6!o").op == Explode("once")
    assert expr("1d6!p").op == Explode("penetrating")


def test_count_and_unique():
    node = expr("4d6uc")
    assert node.op == Count()
    assert node.child.op == Unique()


def test_filter_condition_forms():
    assert expr("4d6f<3").op == Filter(Condition("<", 3))
    assert expr("4d6f>=-2").op == Filter(Condition(">=", -2))
    assert expr("4df f=='+'").op == Filter(Condition("==", "+"))
    assert expr("c f==HEADS").op == Filter(Condition("==", "HEADS"))


def test_empty_expression():
    with pytest.raises(ParseError):
        parse("")
    with pytest.raises(ParseError):
        parse("   ")


def test_unbalanced_parens():
    with pytest.raises(ParseError):
        parse("((1d6)")
    with pytest.raises(ParseError):
        parse("1d6)")


def test_trailing_separator_tolerated():
    assert len(parse("d6;").statements) == 1


ROUND_TRIP_CORPUS = [
    "2d20kh+2", "1d1", "3d6dldh", "4d6f<3", "1d6rr<2", "1d6!p",
    "#SUITS=d{CLUBS,HEARTS,DIAMONDS,SPADES};@SUITS", "(d6;d6)-3",
    "(d6;d6)*(d6;d6)", "3/2", "3\\2", "-1d6", "d%", "df", "2c",
    "d{1,2,3..8,9,10,100}", "d{'-','-','0','0','+','+'}", "4d6uc",
    "2d6kh3", "(1+2)d4", "(2d6)dh", "@D66", "0d6", "4df f!='0' c",
]


@pytest.mark.parametrize("source", ROUND_TRIP_CORPUS)
def test_unparse_round_trip(source):
    ast = parse(source)
    assert parse(unparse(ast)) == ast


@given(st.text(max_size=64))
@settings(max_examples=300, deadline=None)
def test_parse_is_total(source):
    # Arbitrary input either parses or raises a single structured error.
    try:
        parse(source)
    except DiceError:
        pass


_DICE = st.sampled_from(
    ["d6", "2d6", "4d20", "d%", "3c", "d{1,3,5}", "d{2..6}", "10d10"])
_OPS = st.sampled_from(
    ["", "kh", "kl2", "dh", "dl3", "f<3", "f!=2", "r<2", "rr<2",
     "!", "!o", "!p", "c", "u", "uc"])
_MATH = st.sampled_from(["", "+2", "-1", "*3", "/2", "\\2", "+d4"])


@given(_DICE, _OPS, _MATH, st.booleans(), st.booleans())
@settings(max_examples=200, deadline=None)
def test_generated_expressions_round_trip(base, op, math, negate, group):
    source = base + op
    if group:
        source = f"({source};d6)"
    if math:
        # A space keeps "kh-1" from reading as a signed keep count.
        source += " " + math
    if negate:
        source = "-" + source
    ast = parse(source)
    assert parse(unparse(ast)) == ast
