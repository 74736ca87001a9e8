"""Term grammar: positioned parse errors, typing, canonical printing."""

from __future__ import annotations

import pytest
from hypothesis import example, given, settings, strategies as st

from adtrees.errors import PlayerTypeError, StructureError, TermParseError
from adtrees.model import Player
from adtrees.terms import Apply, Basic, TermOp
from adtrees.termtext import format_label, lint_term, parse_term, print_term

from strategies import well_typed_terms

P = Player.PROPONENT
O = Player.OPPONENT


def test_single_identifier():
    assert parse_term("a") == Basic(P, "a")


def test_example_with_string_and_opponent_and():
    term = parse_term('c_p("steal key", and_o(lock, guard))')
    assert term == Apply(
        TermOp.C_P,
        (Basic(P, "steal key"), Apply(TermOp.AND_O, (Basic(O, "lock"), Basic(O, "guard")))),
    )


def test_truncated_input_positions_the_error():
    with pytest.raises(TermParseError) as err:
        parse_term("or_p(a,")
    assert err.value.span.start_line == 1
    assert err.value.span.start_col == 8  # just past the comma
    assert "a term" in err.value.expected


def test_whitespace_and_newlines_insignificant():
    assert parse_term("or_p(\n  a ,\n\tb\n)") == Apply(TermOp.OR_P, (Basic(P, "a"), Basic(P, "b")))


def test_player_conflict_reports_span():
    with pytest.raises(PlayerTypeError) as err:
        parse_term("or_p(or_o(a))")
    assert err.value.span is not None
    assert err.value.span.start_col == 6


def test_nested_counter_rejected_with_span():
    with pytest.raises(StructureError) as err:
        parse_term("c_p(c_p(a, b), c)")
    assert err.value.span is not None


def test_counter_arity_enforced():
    with pytest.raises(StructureError):
        parse_term("c_p(a)")


def test_unknown_operator_is_parse_error():
    with pytest.raises(TermParseError) as err:
        parse_term("nand(a, b)")
    assert err.value.found == "nand"


def test_reserved_op_name_alone_is_parse_error():
    with pytest.raises(TermParseError):
        parse_term("or_p")


def test_string_escapes():
    assert parse_term(r'"qu\"ote \\ back"') == Basic(P, 'qu"ote \\ back')
    with pytest.raises(TermParseError):
        parse_term(r'"bad \n escape"')
    with pytest.raises(TermParseError):
        parse_term('"unterminated')


def test_trailing_garbage_rejected():
    with pytest.raises(TermParseError):
        parse_term("a b")


def test_deep_nesting_capped():
    text = "and_p(" * 600 + "a" + ")" * 600
    with pytest.raises(TermParseError) as err:
        parse_term(text)
    assert "nesting" in err.value.expected[0]


def test_print_basic_and_flat_apply():
    assert print_term(Basic(P, "a")) == "a"
    assert print_term(Apply(TermOp.OR_P, (Basic(P, "a"), Basic(P, "b")))) == "or_p(a, b)"


def test_print_quotes_non_identifier_labels():
    assert print_term(Basic(P, "steal key")) == '"steal key"'
    assert print_term(Basic(P, "or_p")) == '"or_p"'
    assert format_label('a"b\\c') == '"a\\"b\\\\c"'


@settings(max_examples=300)
@given(well_typed_terms())
def test_parse_print_round_trip(term):
    assert parse_term(print_term(term)) == term


@given(st.text(max_size=60))
@example("or_p(")
@example('c_o("')
@example("\x00\\")
def test_parser_never_crashes_on_arbitrary_text(text):
    try:
        parse_term(text)
    except (TermParseError, PlayerTypeError, StructureError):
        pass


def test_lint_flags_single_child_refinements():
    term = Apply(TermOp.OR_P, (Apply(TermOp.AND_P, (Basic(P, "a"), Basic(P, "b"))),))
    findings = lint_term(term)
    assert len(findings) == 1 and "or_p" in findings[0]
