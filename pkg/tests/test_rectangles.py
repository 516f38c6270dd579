import pytest
from hypothesis import given, strategies as st

from oracles import ln_words
from ucfgbound import FiniteLanguage, Grammar, grammar_log, grammar_unambiguous, to_cnf
from ucfgbound.errors import OddLength
from ucfgbound.grammar import canonical_parse_tree
from ucfgbound.rectangles import (OrderedPartition, Rectangle, SetRectangle, SetWord,
                                  extract_rectangle_cover, find_balanced_nonterminal,
                                  ln_interval_cover, position_index, rectangle_of_nonterminal,
                                  rectangle_to_set_rectangle, set_rectangle_to_rectangle,
                                  sets_to_word, verify_cover, word_to_sets)


def test_positioned_names_carry_start_offsets():
    g = Grammar.from_rules("S", [("S", "A A"), ("A", "a")])
    pg = position_index(to_cnf(g))
    assert pg.length == 2
    assert sorted(pg.origin.values()) == [("A", 1), ("A", 2), ("S", 1)]
    assert {pg.position(x) for x in pg.grammar.nonterminals} == {1, 2}


def test_heavy_child_descent_stops_below_two_thirds():
    cnf = to_cnf(grammar_unambiguous(3))
    tree = canonical_parse_tree(cnf, "aaaaaa")
    node = find_balanced_nonterminal(tree)
    assert 2 <= node.leaf_count < 4


def test_rectangle_of_nonterminal_is_a_rectangle():
    cnf = to_cnf(grammar_unambiguous(2))
    pg = position_index(cnf)
    for name in sorted(pg.grammar.nonterminals):
        r = rectangle_of_nonterminal(pg, name)
        assert r.n1 == pg.position(name) - 1
        assert r.words <= set(ln_words(2))


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_log_grammar_cover(n):
    rects, rep = extract_rectangle_cover(grammar_log(n))
    assert rep.union_equal and rep.all_balanced and rep.within_bound
    assert all(n <= 3 * r.n2 <= 4 * n for r in rects)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_unambiguous_cover_is_disjoint(n):
    rects, rep = extract_rectangle_cover(grammar_unambiguous(n))
    assert rep.union_equal and rep.all_balanced and rep.disjoint
    assert sum(len(r) for r in rects) == len(ln_words(n))


def test_short_words_use_singletons():
    g = Grammar.from_rules("S", [("S", "A A"), ("A", "a"), ("A", "b")])
    rects, rep = extract_rectangle_cover(g)
    assert rep.degenerate and rep.ell == 4 and rep.union_equal


def test_single_word_grammar():
    g = Grammar.from_rules("S", [("S", "a b a")])
    rects, rep = extract_rectangle_cover(g)
    assert rep.ell == 1 and rep.union_equal


def test_interval_cover_overlaps():
    rects = ln_interval_cover(3)
    rep = verify_cover(rects, ln_words(3), require_disjoint=True)
    # Middles of length n + 1 are balanced once n >= 3.
    assert rep.union_equal and not rep.disjoint and rep.all_balanced


def test_set_view():
    s = word_to_sets("abba")
    assert s == SetWord(0b1001, 2)
    assert s.labels() == ["x1", "y2"]
    assert sets_to_word(s) == "abba"
    with pytest.raises(OddLength):
        word_to_sets("aba")


@given(st.text(alphabet="ab", min_size=0, max_size=8).filter(lambda w: len(w) % 2 == 0))
def test_set_view_round_trip(w):
    assert sets_to_word(word_to_sets(w)) == w


def test_partition_sizes_and_balance():
    p = OrderedPartition(4, 2, 5, side=0)
    assert p.sizes() == (4, 4) and p.is_balanced()
    assert not OrderedPartition(4, 1, 2).is_balanced()
    assert OrderedPartition.from_mask(4, p.pi1) == OrderedPartition(4, 2, 5, side=1)
    assert OrderedPartition.from_mask(4, 0b101) is None


def test_set_rectangle_rejects_wrong_side():
    p = OrderedPartition(2, 1, 2)
    with pytest.raises(ValueError):
        SetRectangle(p, {0b0100}, {0})


@pytest.mark.parametrize("n", [2, 3, 4])
def test_rectangle_and_set_rectangle_agree(n):
    rects, _ = extract_rectangle_cover(grammar_unambiguous(n))
    for r in rects:
        sr = rectangle_to_set_rectangle(r)
        assert sr.partition.i == r.n1 + 1 and sr.partition.j == r.n1 + r.n2
        assert sr.words() == r.words
        back = set_rectangle_to_rectangle(sr)
        assert back.words == r.words and (back.n1, back.n2) == (r.n1, r.n2)


def test_odd_rectangle_has_no_set_view():
    r = Rectangle(frozenset({("a", "")}), FiniteLanguage(["ab"]), 1, 2, 0)
    with pytest.raises(OddLength):
        rectangle_to_set_rectangle(r)
