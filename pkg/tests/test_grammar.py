import pytest
from hypothesis import given

from oracles import derivation_count
from strategies import acyclic_grammars
from ucfgbound import (EmptyLanguage, EmptyWordDerivable, FiniteLanguage, Grammar,
                       InfiniteLanguage, MixedLengths, NotCNF, assert_finite,
                       canonical_parse_tree, count_parse_trees, enumerate_language,
                       grammar_kmn, grammar_size, is_unambiguous, nonterminal_lengths,
                       prune_useless, to_cnf, topological_order, tree_counts)
from ucfgbound.errors import CapExceeded


def G(start, *rules):
    return Grammar.from_rules(start, rules)


def plain(g):
    return [(r.lhs, r.rhs) for r in g.rules]


def test_size_counts_rhs_symbols():
    assert grammar_size(G("S", ("S", "A A"), ("A", "a"))) == 3
    assert grammar_size(grammar_kmn(1)) == 16


def test_prune_drops_unreachable_and_unproductive():
    g = G("S", ("S", "A"), ("S", "D"), ("A", "a"), ("D", "D b"), ("U", "a"))
    assert plain(prune_useless(g)) == [("S", ("A",)), ("A", ("a",))]


def test_prune_empty_language():
    with pytest.raises(EmptyLanguage):
        prune_useless(G("S", ("S", "S a")))


def test_prune_keeps_identity_when_nothing_to_drop():
    g = G("S", ("S", "a"))
    assert prune_useless(g) is g


def test_cycle_is_reported():
    g = G("S", ("S", "a S"), ("S", "a"))
    with pytest.raises(InfiniteLanguage) as info:
        assert_finite(g)
    assert info.value.cycle[0] == info.value.cycle[-1] == "S"


def test_topological_order_puts_dependencies_first():
    order = topological_order(G("S", ("S", "A B"), ("A", "B"), ("B", "b")))
    assert order.index("B") < order.index("A") < order.index("S")


def test_enumerate_small():
    g = G("S", ("S", "A A"), ("A", "a"), ("A", "b"))
    assert list(enumerate_language(g)) == ["aa", "ab", "ba", "bb"]


def test_enumerate_cap():
    g = G("S", ("S", "A A A"), ("A", "a"), ("A", "b"))
    with pytest.raises(CapExceeded):
        enumerate_language(g, max_words=4)


def test_canonical_order_is_length_then_lex():
    assert list(FiniteLanguage(["b", "aa", "a"])) == ["a", "b", "aa"]


def test_kmn_lengths():
    # A_0 -> B_0 a B_1 a gives 1 + 1 + 2 + 1 = 5 letters.
    assert nonterminal_lengths(grammar_kmn(1)) == {"B_0": 1, "B_1": 2, "A_0": 5, "A_1": 6}


def test_mixed_lengths():
    with pytest.raises(MixedLengths) as info:
        nonterminal_lengths(G("S", ("S", "a"), ("S", "a a")))
    assert info.value.lengths == (1, 2)


def test_empty_rhs_rejected_by_cnf():
    with pytest.raises(EmptyWordDerivable):
        to_cnf(G("S", ("S", "A a"), ("A", ())))


def test_cnf_shape_and_names():
    c = to_cnf(G("S", ("S", "a B a"), ("B", "b")))
    assert c.is_cnf()
    assert plain(c) == [("S", ("T#a", "S#0#1")), ("S#0#1", ("B", "T#a")),
                        ("B", ("b",)), ("T#a", ("a",))]


def test_unit_paths_stay_separate():
    # S -> A | B with A -> a and B -> a: "a" has two trees.
    g = G("S", ("S", "A"), ("S", "B"), ("A", "a"), ("B", "a"))
    c = to_cnf(g)
    assert len(c.rules) == 2 and {r.tag for r in c.rules} == {"A", "B"}
    assert count_parse_trees(c, "a") == 2


def test_count_requires_cnf():
    with pytest.raises(NotCNF):
        count_parse_trees(G("S", ("S", "a a")), "aa")


def test_fig1_word_has_several_trees():
    c = to_cnf(grammar_kmn(1))
    rules = plain(grammar_kmn(1))
    assert count_parse_trees(c, "aaaaaa") == derivation_count(rules, "A_1", "aaaaaa") == 4


def test_is_unambiguous_witness_is_smallest():
    ok, witness = is_unambiguous(grammar_kmn(1))
    assert not ok and witness == "aaaaaa"
    g = G("S", ("S", "A"), ("A", "a"), ("A", "b"))
    assert is_unambiguous(g) == (True, None)


def test_canonical_tree_uses_first_rule():
    g = G("S", ("S", "A"), ("S", "B"), ("A", "a"), ("B", "a"))
    tree = canonical_parse_tree(to_cnf(g), "a")
    assert tree.word == "a" and tree.rule.tag == "A"
    assert canonical_parse_tree(to_cnf(g), "b") is None


@given(acyclic_grammars())
def test_cnf_preserves_language_and_tree_counts(g):
    try:
        g = prune_useless(g)
    except EmptyLanguage:
        return
    c = to_cnf(g)
    assert c.is_cnf()
    assert grammar_size(c) <= grammar_size(g) ** 2
    counts = tree_counts(g)
    assert tree_counts(c) == counts
    lang = enumerate_language(g)
    assert enumerate_language(c).as_set == lang.as_set == set(counts)
    rules = plain(g)
    for w in list(lang)[:40]:
        assert counts[w] == derivation_count(rules, g.start, w)


@given(acyclic_grammars())
def test_ambiguity_verdict_matches_oracle(g):
    try:
        g = prune_useless(g)
    except EmptyLanguage:
        return
    rules = plain(g)
    words = list(enumerate_language(g))
    ambiguous = [w for w in words if derivation_count(rules, g.start, w) >= 2]
    assert is_unambiguous(g) == (not ambiguous, ambiguous[0] if ambiguous else None)
