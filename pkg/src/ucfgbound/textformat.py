"""Plain-text grammar and NFA files.

Grammar files::

    @start S
    S -> A_1 | A_2
    A_1 -> a a

Consecutive rules with the same left side share one line, alternatives
separated by ``|``.  An alternative may end in ``[tag]`` (tags only appear on
CNF output) and ``ε`` stands for the empty right side.  Blank lines are
ignored.

NFA files list ``state <s>``, ``init <s>``, ``acc <s>`` and
``tr <s> <c> <t>`` lines.
"""
from __future__ import annotations

import re

from .constructions import Nfa
from .errors import GrammarParseError
from .grammar import Grammar, Rule

NONTERMINAL = re.compile(r"[A-Z][A-Za-z0-9_#@]*\Z")
TERMINAL = re.compile(r"[a-z]\Z")
TAG = re.compile(r"\[([^\[\]\s|]+)\]\Z")
EMPTY = "ε"


def _alternative(rule: Rule) -> str:
    body = " ".join(rule.rhs) if rule.rhs else EMPTY
    return body + (f" [{rule.tag}]" if rule.tag else "")


def print_grammar(g: Grammar) -> str:
    lines = [f"@start {g.start}"]
    run = []
    for r in g.rules:
        if run and run[-1].lhs != r.lhs:
            lines.append(f"{run[0].lhs} -> " + " | ".join(map(_alternative, run)))
            run = []
        run.append(r)
    if run:
        lines.append(f"{run[0].lhs} -> " + " | ".join(map(_alternative, run)))
    return "\n".join(lines) + "\n"


def _tokens(text, offset):
    """Whitespace-separated tokens with their 1-based columns."""
    for m in re.finditer(r"\S+", text):
        yield m.group(), offset + m.start() + 1


def parse_grammar(text: str) -> Grammar:
    start = None
    rules = []
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("@start"):
            toks = list(_tokens(line, 0))
            if toks[0][0] != "@start" or len(toks) != 2:
                raise GrammarParseError("expected '@start <Nonterminal>'", lineno, toks[0][1])
            if start is not None:
                raise GrammarParseError("duplicate @start", lineno, toks[0][1])
            if not NONTERMINAL.match(toks[1][0]):
                raise GrammarParseError(f"bad start symbol {toks[1][0]!r}", lineno, toks[1][1])
            start = toks[1][0]
            continue
        arrow = line.find("->")
        if arrow < 0:
            col = len(line) - len(line.lstrip()) + 1
            raise GrammarParseError("expected '->'", lineno, col)
        lhs_toks = list(_tokens(line[:arrow], 0))
        if len(lhs_toks) != 1 or not NONTERMINAL.match(lhs_toks[0][0]):
            col = lhs_toks[0][1] if lhs_toks else 1
            raise GrammarParseError("left side must be one nonterminal", lineno, col)
        lhs = lhs_toks[0][0]
        pos = arrow + 2
        for part in line[pos:].split("|"):
            toks = list(_tokens(part, pos))
            pos += len(part) + 1
            tag = ""
            if toks and TAG.match(toks[-1][0]):
                tag = TAG.match(toks[-1][0]).group(1)
                toks.pop()
            if not toks:
                raise GrammarParseError("empty alternative (write ε)", lineno, pos - len(part))
            if [t for t, _ in toks] == [EMPTY]:
                rules.append(Rule(lhs, (), tag))
                continue
            rhs = []
            for tok, col in toks:
                if not (NONTERMINAL.match(tok) or TERMINAL.match(tok)):
                    raise GrammarParseError(f"bad symbol {tok!r}", lineno, col)
                rhs.append(tok)
            rules.append(Rule(lhs, tuple(rhs), tag))
    if start is None:
        raise GrammarParseError("missing @start line", 1, 1)
    try:
        return Grammar(start, tuple(rules))
    except ValueError as exc:
        raise GrammarParseError(str(exc), 1, 1) from None


def print_nfa(m: Nfa) -> str:
    lines = [f"state {s}" for s in m.states]
    lines += [f"init {s}" for s in sorted(m.initial)]
    lines += [f"acc {s}" for s in sorted(m.accepting)]
    lines += [f"tr {s} {c} {t}" for s, c, t in sorted(m.transitions)]
    return "\n".join(lines) + "\n"


def parse_nfa(text: str) -> Nfa:
    def state(tok):
        return int(tok) if tok.isdigit() else tok

    states, initial, accepting, transitions = [], set(), set(), set()
    shapes = {"state": 2, "init": 2, "acc": 2, "tr": 4}
    for lineno, line in enumerate(text.splitlines(), 1):
        toks = line.split()
        if not toks:
            continue
        if shapes.get(toks[0]) != len(toks):
            raise GrammarParseError(f"bad NFA line {line.strip()!r}", lineno, 1)
        kind = toks[0]
        if kind == "state":
            states.append(state(toks[1]))
        elif kind == "init":
            initial.add(state(toks[1]))
        elif kind == "acc":
            accepting.add(state(toks[1]))
        else:
            transitions.add((state(toks[1]), toks[2], state(toks[3])))
    try:
        return Nfa(tuple(states), frozenset(initial), frozenset(transitions), frozenset(accepting))
    except ValueError as exc:
        raise GrammarParseError(str(exc), 1, 1) from None
