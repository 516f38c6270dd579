"""Balanced rectangle covers extracted from grammars, and the set view of words.

The extraction pipeline is prune -> CNF -> position indexing, then a loop
that repeatedly takes the smallest remaining word, finds a balanced node in
its canonical parse tree by heavy-child descent, emits the rectangle of that
node's positioned nonterminal and deletes it.

In the set view a word w of length 2n is the set of indices k with w_k = a,
stored as an int with bit k-1 standing for z_k (z_k = x_k for k <= n and
z_k = y_{k-n} otherwise).
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

from .errors import EmptyLanguage, NotCNF, OddLength
from .grammar import (
    DEFAULT_MAX_WORDS,
    FiniteLanguage,
    Grammar,
    ParseTree,
    Rule,
    canonical_parse_tree,
    enumerate_language,
    grammar_size,
    is_nonterminal,
    nonterminal_lengths,
    prune_useless,
    to_cnf,
    topological_order,
)

PLACEHOLDER = "\x00"


# -- positioned grammars -------------------------------------------------------

@dataclass(frozen=True)
class PositionedGrammar:
    grammar: Grammar
    origin: dict  # positioned name -> (base nonterminal, start position)
    length: int

    def position(self, name):
        return self.origin[name][1]


def positioned_name(nonterminal: str, position: int) -> str:
    return f"{nonterminal}@{position}"


def position_index(g: Grammar) -> PositionedGrammar:
    """Tag every nonterminal with the start position of its yield.

    Only symbols reachable from ``(S, 1)`` are created, so the result is
    already pruned.
    """
    if not g.is_cnf():
        raise NotCNF("position_index needs a grammar in Chomsky normal form")
    g = prune_useless(g)
    lengths = nonterminal_lengths(g)
    origin = {}
    rules = []
    queue = [(g.start, 1)]
    origin[positioned_name(g.start, 1)] = (g.start, 1)
    head = 0
    while head < len(queue):
        a, i = queue[head]
        head += 1
        name = positioned_name(a, i)
        for r in g.rules_for(a):
            if len(r.rhs) == 1:
                rules.append(Rule(name, r.rhs, r.tag))
                continue
            b, c = r.rhs
            j = i + lengths[b]
            kids = []
            for sym, pos in ((b, i), (c, j)):
                pname = positioned_name(sym, pos)
                if pname not in origin:
                    origin[pname] = (sym, pos)
                    queue.append((sym, pos))
                kids.append(pname)
            rules.append(Rule(name, tuple(kids), r.tag))
    pg = Grammar(positioned_name(g.start, 1), tuple(rules))
    return PositionedGrammar(pg, origin, lengths[g.start])


# -- rectangles ----------------------------------------------------------------

@dataclass(frozen=True)
class Rectangle:
    """Words ``p + m + s`` for (p, s) in ``contexts`` and m in ``middle``."""

    contexts: frozenset
    middle: FiniteLanguage
    n1: int
    n2: int
    n3: int
    source: str = ""

    def __post_init__(self):
        for p, s in self.contexts:
            if len(p) != self.n1 or len(s) != self.n3:
                raise ValueError(f"context ({p!r}, {s!r}) does not fit ({self.n1}, {self.n3})")
        for m in self.middle:
            if len(m) != self.n2:
                raise ValueError(f"middle word {m!r} has length != {self.n2}")

    @property
    def length(self) -> int:
        return self.n1 + self.n2 + self.n3

    def is_balanced(self) -> bool:
        n = self.length
        return n <= 3 * self.n2 <= 2 * n

    def __len__(self):
        return len(self.contexts) * len(self.middle)

    @cached_property
    def words(self) -> frozenset:
        return frozenset(p + m + s for p, s in self.contexts for m in self.middle)


def find_balanced_nonterminal(tree: ParseTree) -> ParseTree:
    """Heavy-child descent; stops at the first node with fewer than 2N/3 leaves.

    Ties go to the left child.  Needs N >= 2 so that the descent stops at an
    internal node.
    """
    total = tree.leaf_count
    node = tree
    while 3 * node.leaf_count >= 2 * total:
        best = None
        for child in node.children:
            if isinstance(child, str):
                continue
            if best is None or child.leaf_count > best.leaf_count:
                best = child
        if best is None:
            raise ValueError(f"no balanced node in a tree with {total} leaves")
        node = best
    return node


def rectangle_of_nonterminal(pg: PositionedGrammar, name: str,
                             max_words: int = DEFAULT_MAX_WORDS) -> Rectangle:
    g = pg.grammar
    middle = enumerate_language(g.with_start(name), max_words)
    rules = [r for r in g.rules if r.lhs != name] + [Rule(name, (PLACEHOLDER,))]
    opened = enumerate_language(Grammar(g.start, tuple(rules)), max_words)
    contexts = set()
    for w in opened:
        k = w.find(PLACEHOLDER)
        if k >= 0:
            contexts.add((w[:k], w[k + 1:]))
    n1 = pg.position(name) - 1
    n2 = len(middle.words[0])
    return Rectangle(frozenset(contexts), middle, n1, n2, pg.length - n1 - n2, source=name)


def _smallest_word(g: Grammar) -> str:
    # Every nonterminal has a single yield length, so minima concatenate.
    best = {}
    for a in topological_order(g):
        best[a] = min("".join(best[s] if is_nonterminal(s) else s for s in r.rhs)
                      for r in g.rules_for(a))
    return best[g.start]


@dataclass
class CoverReport:
    ell: int
    word_length: int
    union_equal: bool
    missing: tuple
    extra: tuple
    balanced: tuple
    sizes: tuple
    disjoint: bool = None
    overlaps: tuple = ()
    degenerate: bool = False
    raw_size: int = None
    cnf_size: int = None
    positioned_size: int = None
    sources: tuple = ()

    @property
    def all_balanced(self) -> bool:
        return all(self.balanced)

    @property
    def bound(self):
        """N * |CNF|, the cap on the number of extracted rectangles."""
        if self.cnf_size is None:
            return None
        return self.word_length * self.cnf_size

    @property
    def within_bound(self):
        return None if self.bound is None else self.ell <= self.bound


def verify_cover(rects, language, require_disjoint: bool = False) -> CoverReport:
    owners = defaultdict(list)
    for idx, r in enumerate(rects):
        for w in r.words:
            owners[w].append(idx)
    target = set(language)
    covered = set(owners)
    overlaps = set()
    if require_disjoint:
        for idxs in owners.values():
            for a in range(len(idxs)):
                for b in range(a + 1, len(idxs)):
                    overlaps.add((idxs[a], idxs[b]))
    length = rects[0].length if rects else (len(next(iter(target))) if target else 0)
    return CoverReport(
        ell=len(rects),
        word_length=length,
        union_equal=covered == target,
        missing=tuple(sorted(target - covered)[:10]),
        extra=tuple(sorted(covered - target)[:10]),
        balanced=tuple(r.is_balanced() for r in rects),
        sizes=tuple(len(r) for r in rects),
        disjoint=(not overlaps) if require_disjoint else None,
        overlaps=tuple(sorted(overlaps)),
        degenerate=length < 3,
        sources=tuple(r.source for r in rects),
    )


def extract_rectangle_cover(g: Grammar, max_words: int = DEFAULT_MAX_WORDS):
    """Return ``(rectangles, report)`` for a uniform-length finite grammar."""
    base = prune_useless(g)
    cnf = to_cnf(base)
    language = enumerate_language(cnf, max_words)
    length = nonterminal_lengths(cnf)[cnf.start]
    rects = []
    positioned_size = None
    if length < 3:
        for w in language:
            rects.append(Rectangle(frozenset({("", "")}), FiniteLanguage([w]), 0, length, 0,
                                   source=w))
    else:
        pg = position_index(cnf)
        positioned_size = grammar_size(pg.grammar)
        current = pg.grammar
        while True:
            word = _smallest_word(current)
            tree = canonical_parse_tree(current, word)
            node = find_balanced_nonterminal(tree)
            view = PositionedGrammar(current, pg.origin, length)
            rects.append(rectangle_of_nonterminal(view, node.label, max_words))
            remaining = tuple(r for r in current.rules if r.lhs != node.label)
            try:
                current = prune_useless(Grammar(current.start, remaining))
            except EmptyLanguage:
                break
    report = verify_cover(rects, language, require_disjoint=True)
    report.raw_size = grammar_size(base)
    report.cnf_size = grammar_size(cnf)
    report.positioned_size = positioned_size
    return rects, report


def ln_interval_cover(n: int) -> list:
    """The n overlapping rectangles (a+b)^k a (a+b)^{n-1} a (a+b)^{n-1-k}."""
    def words(k):
        return ["".join(p) for p in itertools.product("ab", repeat=k)]

    middle = FiniteLanguage("a" + w + "a" for w in words(n - 1))
    rects = []
    for k in range(n):
        contexts = frozenset((p, s) for p in words(k) for s in words(n - 1 - k))
        rects.append(Rectangle(contexts, middle, k, n + 1, n - 1 - k, source=f"k={k}"))
    return rects


# -- set perspective -----------------------------------------------------------

class SetWord(NamedTuple):
    mask: int
    n: int

    def elements(self) -> list:
        """1-based universe indices k with z_k selected."""
        return [k + 1 for k in range(2 * self.n) if self.mask >> k & 1]

    def labels(self) -> list:
        return [element_label(k, self.n) for k in self.elements()]


def element_label(k: int, n: int) -> str:
    return f"x{k}" if k <= n else f"y{k - n}"


def interval_mask(i: int, j: int) -> int:
    """Mask of Z[i, j] (1-based, inclusive)."""
    if j < i:
        return 0
    return ((1 << (j - i + 1)) - 1) << (i - 1)


def word_mask(word: str) -> int:
    mask = 0
    for k, c in enumerate(word):
        if c == "a":
            mask |= 1 << k
    return mask


def mask_word(mask: int, length: int) -> str:
    return "".join("a" if mask >> k & 1 else "b" for k in range(length))


def word_to_sets(word: str) -> SetWord:
    if len(word) % 2:
        raise OddLength(f"word of odd length {len(word)}")
    return SetWord(word_mask(word), len(word) // 2)


def sets_to_word(s: SetWord) -> str:
    return mask_word(s.mask, 2 * s.n)


@dataclass(frozen=True)
class OrderedPartition:
    """Partition of Z (|Z| = 2n) where part ``side`` equals Z[i, j]."""

    n: int
    i: int
    j: int
    side: int = 0

    def __post_init__(self):
        if not 1 <= self.i <= self.j <= 2 * self.n:
            raise ValueError(f"bad interval [{self.i}, {self.j}] for n={self.n}")
        if self.side not in (0, 1):
            raise ValueError("side must be 0 or 1")

    @property
    def full(self) -> int:
        return (1 << (2 * self.n)) - 1

    @cached_property
    def pi0(self) -> int:
        inside = interval_mask(self.i, self.j)
        return inside if self.side == 0 else self.full & ~inside

    @cached_property
    def pi1(self) -> int:
        return self.full & ~self.pi0

    def sizes(self):
        return bin(self.pi0).count("1"), bin(self.pi1).count("1")

    def is_balanced(self) -> bool:
        return all(2 * self.n <= 3 * s <= 4 * self.n for s in self.sizes())

    @classmethod
    def from_mask(cls, n: int, pi0: int):
        """The ordered partition with the given Pi_0, or None if not ordered."""
        full = (1 << (2 * n)) - 1
        for side, part in ((0, pi0), (1, full & ~pi0)):
            if part == 0:
                continue
            low = (part & -part).bit_length()
            high = part.bit_length()
            if part == interval_mask(low, high):
                return cls(n, low, high, side)
        return None


@dataclass(frozen=True)
class SetRectangle:
    partition: OrderedPartition
    S: frozenset
    T: frozenset

    def __post_init__(self):
        object.__setattr__(self, "S", frozenset(self.S))
        object.__setattr__(self, "T", frozenset(self.T))
        p = self.partition
        if any(u & ~p.pi0 for u in self.S) or any(v & ~p.pi1 for v in self.T):
            raise ValueError("S must live in Pi_0 and T in Pi_1")

    @property
    def n(self):
        return self.partition.n

    def __len__(self):
        return len(self.S) * len(self.T)

    def __contains__(self, mask):
        p = self.partition
        return (mask & p.pi0) in self.S and (mask & p.pi1) in self.T

    @cached_property
    def members(self) -> frozenset:
        return frozenset(u | v for u in self.S for v in self.T)

    def words(self) -> frozenset:
        return frozenset(mask_word(m, 2 * self.n) for m in self.members)


def rectangle_to_set_rectangle(r: Rectangle) -> SetRectangle:
    if r.length % 2:
        raise OddLength(f"rectangle over words of odd length {r.length}")
    n = r.length // 2
    part = OrderedPartition(n, r.n1 + 1, r.n1 + r.n2, side=1)
    S = {word_mask(p + "b" * r.n2 + s) for p, s in r.contexts}
    T = {word_mask("b" * r.n1 + m + "b" * r.n3) for m in r.middle}
    return SetRectangle(part, S, T)


def set_rectangle_to_rectangle(sr: SetRectangle) -> Rectangle:
    p = sr.partition
    inside, outside = (sr.S, sr.T) if p.side == 0 else (sr.T, sr.S)
    length = 2 * p.n
    n1, n2 = p.i - 1, p.j - p.i + 1
    middle = FiniteLanguage(mask_word(m, length)[n1:n1 + n2] for m in inside)
    contexts = set()
    for m in outside:
        w = mask_word(m, length)
        contexts.add((w[:n1], w[n1 + n2:]))
    return Rectangle(frozenset(contexts), middle, n1, n2, length - n1 - n2)
