"""Finite-language context-free grammars.

A grammar is an immutable value: a start symbol plus an ordered tuple of
rules.  Terminals are single characters, nonterminals are identifiers that
start with an uppercase letter.  Everything here assumes (and checks) that the
language is finite; the empty word is rejected wherever it would matter.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Union

from .errors import (
    CapExceeded,
    EmptyLanguage,
    EmptyWordDerivable,
    InfiniteLanguage,
    MixedLengths,
    NotCNF,
)

DEFAULT_MAX_WORDS = 1 << 24


def is_nonterminal(symbol: str) -> bool:
    return symbol[:1].isupper()


def word_key(word: str):
    """Canonical order: shorter first, then lexicographic (``a < b``)."""
    return (len(word), word)


@dataclass(frozen=True)
class Rule:
    lhs: str
    rhs: tuple
    # Distinguishes rules with equal (lhs, rhs); only produced by to_cnf.
    tag: str = ""

    def __post_init__(self):
        object.__setattr__(self, "rhs", tuple(self.rhs))

    def __str__(self):
        body = " ".join(self.rhs)
        return f"{self.lhs} -> {body}" + (f" [{self.tag}]" if self.tag else "")


@dataclass(frozen=True)
class Grammar:
    start: str
    rules: tuple

    def __post_init__(self):
        rules = tuple(r if isinstance(r, Rule) else Rule(*r) for r in self.rules)
        object.__setattr__(self, "rules", rules)
        if not is_nonterminal(self.start):
            raise ValueError(f"start symbol {self.start!r} is not a nonterminal")
        seen = set()
        for r in rules:
            if not is_nonterminal(r.lhs):
                raise ValueError(f"rule lhs {r.lhs!r} is not a nonterminal")
            for s in r.rhs:
                if not is_nonterminal(s) and (len(s) != 1 or s.isspace()):
                    raise ValueError(f"bad symbol {s!r} in rule {r}")
            key = (r.lhs, r.rhs, r.tag)
            if key in seen:
                raise ValueError(f"duplicate rule {r}")
            seen.add(key)

    @classmethod
    def from_rules(cls, start: str, rules: Iterable) -> "Grammar":
        """Build from ``(lhs, rhs)`` pairs; a string rhs is split on spaces."""
        out = []
        for item in rules:
            lhs, rhs = item[0], item[1]
            if isinstance(rhs, str):
                rhs = tuple(rhs.split())
            out.append(Rule(lhs, rhs, *item[2:]))
        return cls(start, tuple(out))

    @cached_property
    def nonterminals(self) -> frozenset:
        nts = {self.start}
        for r in self.rules:
            nts.add(r.lhs)
            nts.update(s for s in r.rhs if is_nonterminal(s))
        return frozenset(nts)

    @cached_property
    def terminals(self) -> frozenset:
        return frozenset(s for r in self.rules for s in r.rhs if not is_nonterminal(s))

    @cached_property
    def by_lhs(self) -> Mapping[str, tuple]:
        table = defaultdict(list)
        for r in self.rules:
            table[r.lhs].append(r)
        return {k: tuple(v) for k, v in table.items()}

    def rules_for(self, lhs: str) -> tuple:
        return self.by_lhs.get(lhs, ())

    def with_start(self, start: str) -> "Grammar":
        return Grammar(start, self.rules)

    def is_cnf(self) -> bool:
        for r in self.rules:
            if len(r.rhs) == 1 and not is_nonterminal(r.rhs[0]):
                continue
            if len(r.rhs) == 2 and all(is_nonterminal(s) for s in r.rhs):
                continue
            return False
        return True

    def __str__(self):
        return "\n".join([f"@start {self.start}"] + [str(r) for r in self.rules])


@dataclass(frozen=True, init=False)
class FiniteLanguage:
    """Duplicate-free words in canonical order."""

    words: tuple

    def __init__(self, words: Iterable[str] = ()):
        object.__setattr__(self, "words", tuple(sorted(set(words), key=word_key)))

    @cached_property
    def as_set(self) -> frozenset:
        return frozenset(self.words)

    @cached_property
    def uniform_length(self):
        lengths = {len(w) for w in self.words}
        return lengths.pop() if len(lengths) == 1 else None

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def __contains__(self, word):
        return word in self.as_set


Word = str
Child = Union["ParseTree", str]


@dataclass(frozen=True)
class ParseTree:
    label: str
    children: tuple
    rule: Rule = None

    @cached_property
    def word(self) -> str:
        return "".join(c if isinstance(c, str) else c.word for c in self.children)

    @property
    def leaf_count(self) -> int:
        return len(self.word)

    def nodes(self):
        """Pre-order walk over internal nodes."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(c for c in reversed(node.children) if not isinstance(c, str))


def grammar_size(g: Grammar) -> int:
    return sum(len(r.rhs) for r in g.rules)


def _productive(g: Grammar) -> set:
    productive = set()
    changed = True
    while changed:
        changed = False
        for r in g.rules:
            if r.lhs in productive:
                continue
            if all(not is_nonterminal(s) or s in productive for s in r.rhs):
                productive.add(r.lhs)
                changed = True
    return productive


def prune_useless(g: Grammar) -> Grammar:
    """Drop nonterminals that are unproductive or unreachable from the start."""
    productive = _productive(g)
    if g.start not in productive:
        raise EmptyLanguage(f"start symbol {g.start!r} derives no word")
    useful = [r for r in g.rules
              if r.lhs in productive
              and all(not is_nonterminal(s) or s in productive for s in r.rhs)]
    by_lhs = defaultdict(list)
    for r in useful:
        by_lhs[r.lhs].append(r)
    reachable = {g.start}
    stack = [g.start]
    while stack:
        for r in by_lhs[stack.pop()]:
            for s in r.rhs:
                if is_nonterminal(s) and s not in reachable:
                    reachable.add(s)
                    stack.append(s)
    kept = tuple(r for r in useful if r.lhs in reachable)
    if kept == g.rules:
        return g
    return Grammar(g.start, kept)


def topological_order(g: Grammar) -> list:
    """Nonterminals reachable from the start, dependencies before dependants.

    Raises InfiniteLanguage with a witness cycle if the dependency relation
    is cyclic.
    """
    children = {}
    for a in g.nonterminals:
        children[a] = list(dict.fromkeys(
            s for r in g.rules_for(a) for s in r.rhs if is_nonterminal(s)))
    order = []
    state = {}  # 1 = on stack, 2 = done
    stack = [(g.start, iter(children[g.start]))]
    path = [g.start]
    state[g.start] = 1
    while stack:
        node, it = stack[-1]
        nxt = next(it, None)
        if nxt is None:
            stack.pop()
            path.pop()
            state[node] = 2
            order.append(node)
            continue
        st = state.get(nxt)
        if st == 1:
            cycle = path[path.index(nxt):] + [nxt]
            raise InfiniteLanguage(cycle)
        if st is None:
            state[nxt] = 1
            path.append(nxt)
            stack.append((nxt, iter(children[nxt])))
    return order


def assert_finite(g: Grammar) -> None:
    topological_order(prune_useless(g))


def _concat_sets(parts, max_words):
    size = 1
    for p in parts:
        size *= len(p)
    if size > max_words:
        raise CapExceeded("word count", max_words, size)
    acc = [""]
    for p in parts:
        acc = [u + v for u in acc for v in p]
    return acc


def _evaluate_sets(g: Grammar, max_words: int, max_length=None) -> dict:
    langs = {}
    for a in topological_order(g):
        acc = set()
        for r in g.rules_for(a):
            parts = [langs[s] if is_nonterminal(s) else (s,) for s in r.rhs]
            acc.update(_concat_sets(parts, max_words))
        if len(acc) > max_words:
            raise CapExceeded("word count", max_words, len(acc))
        if max_length is not None:
            longest = max((len(w) for w in acc), default=0)
            if longest > max_length:
                raise CapExceeded("word length", max_length, longest)
        langs[a] = acc
    return langs


def enumerate_language(g: Grammar, max_words: int = DEFAULT_MAX_WORDS,
                       max_length=None) -> FiniteLanguage:
    g = prune_useless(g)
    return FiniteLanguage(_evaluate_sets(g, max_words, max_length)[g.start])


def tree_counts(g: Grammar, max_words: int = DEFAULT_MAX_WORDS) -> dict:
    """Map every word of L(g) to its number of parse trees in ``g``."""
    g = prune_useless(g)
    counts = {}
    for a in topological_order(g):
        acc = defaultdict(int)
        for r in g.rules_for(a):
            parts = [counts[s] if is_nonterminal(s) else {s: 1} for s in r.rhs]
            size = 1
            for p in parts:
                size *= len(p)
            if size > max_words:
                raise CapExceeded("word count", max_words, size)
            partial = {"": 1}
            for p in parts:
                nxt = defaultdict(int)
                for u, cu in partial.items():
                    for v, cv in p.items():
                        nxt[u + v] += cu * cv
                partial = nxt
            for w, c in partial.items():
                acc[w] += c
        counts[a] = dict(acc)
    return counts[g.start]


def nonterminal_lengths(g: Grammar) -> dict:
    g = prune_useless(g)
    lengths = {}
    for a in topological_order(g):
        found = set()
        for r in g.rules_for(a):
            found.add(sum(lengths[s] if is_nonterminal(s) else 1 for s in r.rhs))
        if len(found) > 1:
            first, second = sorted(found)[:2]
            raise MixedLengths(a, first, second)
        lengths[a] = found.pop()
    return lengths


def _fresh(name: str, taken: set) -> str:
    while name in taken:
        name += "#"
    taken.add(name)
    return name


def to_cnf(g: Grammar) -> Grammar:
    """Chomsky normal form that preserves parse-tree counts word by word.

    Terminals inside long right-hand sides go through one shared proxy per
    terminal (``T#a -> a``).  Long rules are binarised right-associatively
    with chain symbols ``<lhs>#<ruleIndex>#<position>``.  Unit rules are
    removed by substitution; every unit path becomes its own rule, tagged with
    the path, so no two original parse trees collapse into one.
    """
    g = prune_useless(g)
    topological_order(g)
    for r in g.rules:
        if not r.rhs:
            raise EmptyWordDerivable(r.lhs)

    taken = set(g.nonterminals)
    proxies = {}
    for c in sorted({s for r in g.rules if len(r.rhs) > 1
                     for s in r.rhs if not is_nonterminal(s)}):
        proxies[c] = _fresh(f"T#{c}", taken)

    binary = []
    for ri, r in enumerate(g.rules):
        if len(r.rhs) == 1:
            binary.append(r)
            continue
        syms = [s if is_nonterminal(s) else proxies[s] for s in r.rhs]
        head, tag = r.lhs, r.tag
        for p in range(len(syms) - 2):
            chain = _fresh(f"{r.lhs}#{ri}#{p + 1}", taken)
            binary.append(Rule(head, (syms[p], chain), tag))
            head, tag = chain, ""
        binary.append(Rule(head, tuple(syms[-2:]), tag))
    binary.extend(Rule(name, (c,)) for c, name in proxies.items())

    by_lhs = defaultdict(list)
    lhs_order = []
    for r in binary:
        if r.lhs not in by_lhs:
            lhs_order.append(r.lhs)
        by_lhs[r.lhs].append(r)

    memo = {}

    def expand(a):
        if a in memo:
            return memo[a]
        out = []
        for r in by_lhs[a]:
            if len(r.rhs) == 1 and is_nonterminal(r.rhs[0]):
                b = r.rhs[0]
                via = f"{b}({r.tag})" if r.tag else b
                out.extend((rhs, via + (">" + t if t else "")) for rhs, t in expand(b))
            else:
                out.append((r.rhs, r.tag))
        memo[a] = out
        return out

    rules = []
    seen = set()
    for a in lhs_order:
        for rhs, tag in expand(a):
            while (a, rhs, tag) in seen:
                tag += "+"
            seen.add((a, rhs, tag))
            rules.append(Rule(a, rhs, tag))
    return prune_useless(Grammar(g.start, tuple(rules)))


def _require_cnf(g: Grammar):
    if not g.is_cnf():
        raise NotCNF("grammar is not in Chomsky normal form")


def _count_table(g: Grammar, w: str) -> dict:
    """CYK chart: ``table[(i, l)][A]`` = number of trees of ``A`` over ``w[i:i+l]``."""
    _require_cnf(g)
    n = len(w)
    lexical = defaultdict(list)
    by_left = defaultdict(list)
    for r in g.rules:
        if len(r.rhs) == 1:
            lexical[r.rhs[0]].append(r.lhs)
        else:
            by_left[r.rhs[0]].append((r.lhs, r.rhs[1]))
    table = {}
    for i, c in enumerate(w):
        cell = defaultdict(int)
        for a in lexical[c]:
            cell[a] += 1
        table[(i, 1)] = cell
    for length in range(2, n + 1):
        for i in range(n - length + 1):
            cell = defaultdict(int)
            for k in range(1, length):
                left, right = table[(i, k)], table[(i + k, length - k)]
                if not left or not right:
                    continue
                for b, cb in left.items():
                    for a, c in by_left.get(b, ()):
                        cc = right.get(c)
                        if cc:
                            cell[a] += cb * cc
            table[(i, length)] = cell
    return table


def count_parse_trees(g: Grammar, w: str) -> int:
    if not w:
        return 0
    return _count_table(g, w)[(0, len(w))].get(g.start, 0)


def canonical_parse_tree(g: Grammar, w: str):
    """First parse tree of ``w`` in leftmost order, rules tried as declared.

    Returns None if ``w`` is not in the language.
    """
    if not w:
        return None
    table = _count_table(g, w)

    def build(a, i, length):
        for r in g.rules_for(a):
            if len(r.rhs) == 1:
                if length == 1 and r.rhs[0] == w[i]:
                    return ParseTree(a, (w[i],), r)
                continue
            b, c = r.rhs
            for k in range(1, length):
                if table[(i, k)].get(b) and table[(i + k, length - k)].get(c):
                    return ParseTree(a, (build(b, i, k), build(c, i + k, length - k)), r)
        raise AssertionError("chart and rules disagree")

    if not table[(0, len(w))].get(g.start):
        return None
    return build(g.start, 0, len(w))


def is_unambiguous(g: Grammar, max_words: int = DEFAULT_MAX_WORDS):
    """Return ``(True, None)`` or ``(False, witness)``.

    The witness is the canonically smallest word with two or more trees.
    """
    counts = tree_counts(to_cnf(g), max_words)
    ambiguous = [w for w, c in counts.items() if c >= 2]
    if ambiguous:
        return False, min(ambiguous, key=word_key)
    return True, None
