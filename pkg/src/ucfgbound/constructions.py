"""Generators for L_n and the grammars and automaton that accept it.

L_n is the set of words of length 2n over {a, b} with two ``a`` at distance
exactly n.  ``language_Ln`` is the brute-force reference every generator is
checked against.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import CapExceeded
from .grammar import FiniteLanguage, Grammar, Rule, prune_useless

LN_CAP = 12
UCFG_CAP = 7


def _check_n(n, cap, what):
    if n < 1:
        raise ValueError(f"{what}: n must be >= 1, got {n}")
    if cap is not None and n > cap:
        raise CapExceeded(what, cap, n)


def ln_mask_members(n: int) -> np.ndarray:
    """Integers (bit 2n-1 = first letter, 0 = a, 1 = b) of the words of L_n, ascending."""
    low = (1 << n) - 1
    v = np.arange(1 << (2 * n), dtype=np.int64)
    hit = (~(v >> n) & ~v & low) != 0
    return v[hit]


def language_Ln(n: int, cap: int = LN_CAP) -> FiniteLanguage:
    _check_n(n, cap, "language_Ln")
    members = ln_mask_members(n)
    width = 2 * n
    shifts = np.arange(width - 1, -1, -1, dtype=np.int64)
    bits = ((members[:, None] >> shifts) & 1).astype(np.uint8) + ord("a")
    raw = np.ascontiguousarray(bits).view(f"S{width}").ravel()
    # Ascending integers are already in lexicographic order.
    lang = FiniteLanguage.__new__(FiniteLanguage)
    object.__setattr__(lang, "words", tuple(x.decode() for x in raw))
    return lang


def in_Ln(word: str) -> bool:
    n, odd = divmod(len(word), 2)
    if odd:
        return False
    return any(word[i] == "a" == word[i + n] for i in range(n))


def grammar_kmn(t: int) -> Grammar:
    """The Theta(t)-size ambiguous grammar for L_{2^t + 1}."""
    if t < 1:
        raise ValueError("t must be >= 1")
    A = [f"A_{i}" for i in range(t + 1)]
    B = [f"B_{i}" for i in range(t + 1)]
    rules = []
    for i in range(t, 0, -1):
        rules.append(Rule(A[i], (B[i - 1], A[i - 1])))
        rules.append(Rule(A[i], (A[i - 1], B[i - 1])))
    rules.append(Rule(A[0], (B[0], "a", B[t], "a")))
    rules.append(Rule(A[0], ("a", B[t], "a", B[0])))
    for i in range(t, 0, -1):
        rules.append(Rule(B[i], (B[i - 1], B[i - 1])))
    rules.append(Rule(B[0], ("a",)))
    rules.append(Rule(B[0], ("b",)))
    return Grammar(A[t], tuple(rules))


def binary_indices(k: int) -> list:
    """Exponents of the binary representation of k, most significant first."""
    return [i for i in range(k.bit_length() - 1, -1, -1) if k >> i & 1]


def grammar_log(n: int) -> Grammar:
    """O(log n)-size grammar for L_n.

    A word of length n-1 is cut into blocks of length 2^i following the binary
    representation of n-1; a binary tree over the blocks chooses the block in
    which ``a w' a`` (|w'| = n-1) is inserted.  Inside the chosen block the
    insertion point is picked bit by bit, from either side.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return Grammar("S", (Rule("S", ("a", "a")),))
    blocks = binary_indices(n - 1)
    top = blocks[0]
    rules = []

    def tree(path, labels):
        c, d = f"C_{path}", f"D_{path}"
        if len(labels) == 1:
            rules.append(Rule(c, (f"A_{labels[0]}",)))
            rules.append(Rule(d, (f"B_{labels[0]}",)))
            return
        half = (len(labels) + 1) // 2
        left, right = path + "0", path + "1"
        rules.append(Rule(c, (f"C_{left}", f"D_{right}")))
        rules.append(Rule(c, (f"D_{left}", f"C_{right}")))
        rules.append(Rule(d, (f"D_{left}", f"D_{right}")))
        tree(left, labels[:half])
        tree(right, labels[half:])

    tree("R", blocks)
    for i in range(top, 0, -1):
        rules.append(Rule(f"A_{i}", (f"B_{i - 1}", f"A_{i - 1}")))
        rules.append(Rule(f"A_{i}", (f"A_{i - 1}", f"B_{i - 1}")))
    rules.append(Rule("A_0", ("B_0", "a", "S", "a")))
    rules.append(Rule("A_0", ("a", "S", "a", "B_0")))
    rules.append(Rule("S", tuple(f"B_{i}" for i in blocks)))
    for i in range(top, 0, -1):
        rules.append(Rule(f"B_{i}", (f"B_{i - 1}", f"B_{i - 1}")))
    rules.append(Rule("B_0", ("a",)))
    rules.append(Rule("B_0", ("b",)))
    # D_R is never used.
    return prune_useless(Grammar("C_R", tuple(rules)))


def _words(length):
    return ("".join(p) for p in itertools.product("ab", repeat=length))


def _ucfg(n, pairs_for):
    rules = [Rule("S", (f"A_{i}",)) for i in range(1, n + 1)]
    literals = set()
    for i in range(1, n + 1):
        free = (f"C_{n - i}",) if i < n else ()
        for w, u in pairs_for(i - 1):
            pw = (f"A_{w}",) if w else ()
            pu = (f"A_{u}",) if u else ()
            literals.update(x for x in (w, u) if x)
            rules.append(Rule(f"A_{i}", pw + ("a",) + free + pu + ("a",) + free))
    for i in range(n - 1, 0, -1):
        if i == 1:
            rules += [Rule("C_1", ("a",)), Rule("C_1", ("b",))]
        else:
            rules += [Rule(f"C_{i}", ("a", f"C_{i - 1}")),
                      Rule(f"C_{i}", ("b", f"C_{i - 1}"))]
    for w in sorted(literals, key=lambda x: (len(x), x)):
        rules.append(Rule(f"A_{w}", tuple(w)))
    return Grammar("S", tuple(rules))


def grammar_unambiguous(n: int, cap: int = UCFG_CAP, allow_big: bool = False) -> Grammar:
    """Unambiguous grammar for L_n keyed on the first matching position.

    For the first index i with w_i = w_{i+n} = a, the prefixes before both
    positions range over every pair with no common ``a``.
    """
    _check_n(n, None if allow_big else cap, "grammar_unambiguous")

    def pairs(k):
        for w in _words(k):
            for u in _words(k):
                if not any(x == "a" == y for x, y in zip(w, u)):
                    yield w, u

    return _ucfg(n, pairs)


def grammar_unambiguous_paper(n: int, cap: int = UCFG_CAP, allow_big: bool = False) -> Grammar:
    """Complement-prefix variant; accepts a proper subset of L_n for n >= 2."""
    _check_n(n, None if allow_big else cap, "grammar_unambiguous_paper")
    flip = str.maketrans("ab", "ba")
    return _ucfg(n, lambda k: ((w, w.translate(flip)) for w in _words(k)))


@dataclass(frozen=True)
class Nfa:
    states: tuple
    initial: frozenset
    transitions: frozenset
    accepting: frozenset

    def __post_init__(self):
        known = set(self.states)
        if not (self.initial <= known and self.accepting <= known):
            raise ValueError("initial/accepting states must be states")
        for s, _, t in self.transitions:
            if s not in known or t not in known:
                raise ValueError(f"transition endpoint outside states: {s}, {t}")

    @cached_property
    def delta(self):
        table = {}
        for s, c, t in self.transitions:
            table.setdefault((s, c), set()).add(t)
        return table

    @property
    def size(self):
        return len(self.states) + len(self.transitions)


def nfa_guess_verify(n: int) -> Nfa:
    """Union of the n chain automata (a+b)^k a (a+b)^{n-1} a (a+b)^{n-1-k}.

    A state is the pattern still to be read, so chain states with the same
    remaining pattern (hence the same right language) coincide.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    patterns = ["?" * k + "a" + "?" * (n - 1) + "a" + "?" * (n - 1 - k) for k in range(n)]
    suffixes = {p[j:] for p in patterns for j in range(len(p) + 1)}
    ordered = sorted(suffixes, key=lambda s: (-len(s), s))
    index = {s: i for i, s in enumerate(ordered)}
    transitions = set()
    for s in ordered:
        if not s:
            continue
        letters = "ab" if s[0] == "?" else "a"
        for c in letters:
            transitions.add((index[s], c, index[s[1:]]))
    return Nfa(
        states=tuple(range(len(ordered))),
        initial=frozenset(index[p] for p in patterns),
        transitions=frozenset(transitions),
        accepting=frozenset({index[""]}),
    )


def nfa_accepts(m: Nfa, word: str) -> bool:
    current = set(m.initial)
    for c in word:
        current = {t for s in current for t in m.delta.get((s, c), ())}
        if not current:
            return False
    return bool(current & m.accepting)
