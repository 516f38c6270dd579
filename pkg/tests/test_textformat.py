import pytest
from hypothesis import given

from strategies import acyclic_grammars
from ucfgbound import (GrammarParseError, grammar_kmn, grammar_log, grammar_unambiguous,
                       grammar_unambiguous_paper, nfa_guess_verify, parse_grammar, parse_nfa,
                       print_grammar, print_nfa, to_cnf)
from ucfgbound.grammar import Grammar, Rule

SHIPPED = [grammar_kmn(1), grammar_kmn(3), grammar_log(2), grammar_log(9),
           grammar_unambiguous(3), grammar_unambiguous_paper(3)]


@pytest.mark.parametrize("g", SHIPPED + [to_cnf(g) for g in SHIPPED])
def test_round_trip(g):
    text = print_grammar(g)
    assert parse_grammar(text) == g
    assert print_grammar(parse_grammar(text)) == text


@given(acyclic_grammars())
def test_round_trip_random(g):
    assert parse_grammar(print_grammar(g)) == g


def test_alternatives_grouped_by_run():
    text = print_grammar(grammar_kmn(1))
    assert text.splitlines()[:2] == ["@start A_1", "A_1 -> B_0 A_0 | A_0 B_0"]
    assert "B_0 -> a | b" in text


def test_tags_and_empty_alternative():
    g = Grammar("S", (Rule("S", ("a",), "A"), Rule("S", ("a",), "B(x)>C"), Rule("S", ())))
    text = print_grammar(g)
    assert "S -> a [A] | a [B(x)>C] | ε" in text
    assert parse_grammar(text) == g


def test_blank_lines_ignored():
    g = parse_grammar("\n@start S\n\nS -> a\n\n")
    assert g.rules == (Rule("S", ("a",)),)


@pytest.mark.parametrize("text, line, column", [
    ("@start S\nS -> a 1", 2, 8),
    ("@start S\nS a", 2, 1),
    ("@start S\ns -> a", 2, 1),
    ("S -> a", 1, 1),
    ("@start S\n@start T\nS -> a", 2, 1),
    ("@start S\nS -> a | ", 2, 9),
])
def test_parse_errors_have_positions(text, line, column):
    with pytest.raises(GrammarParseError) as info:
        parse_grammar(text)
    assert (info.value.line, info.value.column) == (line, column)


@pytest.mark.parametrize("n", [1, 3, 5])
def test_nfa_round_trip(n):
    m = nfa_guess_verify(n)
    text = print_nfa(m)
    assert parse_nfa(text) == m
    assert text.startswith("state 0\n")


def test_nfa_bad_line():
    with pytest.raises(GrammarParseError):
        parse_nfa("state 0\ntr 0 a\n")
