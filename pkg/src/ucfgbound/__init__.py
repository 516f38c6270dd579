"""Finite languages L_n, their grammars, and rectangle-cover lower bounds."""
from .errors import (CapExceeded, EmptyLanguage, EmptyWordDerivable, GrammarParseError,
                     InfiniteLanguage, MixedLengths, NotACover, NotCNF, NotDisjoint,
                     NotDivisibleBy4, OddLength, UcfgError, UnbalanceableAtThisN)
from .grammar import (FiniteLanguage, Grammar, ParseTree, Rule, assert_finite,
                      canonical_parse_tree, count_parse_trees, enumerate_language,
                      grammar_size, is_unambiguous, nonterminal_lengths, prune_useless,
                      to_cnf, topological_order, tree_counts)
from .constructions import (Nfa, grammar_kmn, grammar_log, grammar_unambiguous,
                            grammar_unambiguous_paper, in_Ln, language_Ln, nfa_accepts,
                            nfa_guess_verify)
from .textformat import parse_grammar, parse_nfa, print_grammar, print_nfa

__version__ = "0.1.0"
