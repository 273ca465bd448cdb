"""Regular expressions over vocabulary tokens, compiled to complete DFAs.

Syntax
------
* tokens are separated by whitespace; ``\\`` escapes a special character
* ``.`` matches any single token
* ``*`` or ``⋆`` written as its own word is a wildcard for any (possibly
  empty) token sequence; attached directly to an atom (``A*``, ``.*``,
  ``(A B)*``) it is the Kleene star of that atom
* ``|`` alternation, ``( )`` grouping

``"⋆ machine ⋆ learning ⋆"`` therefore matches every sequence containing
``machine`` followed later by ``learning``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .exceptions import RegexSyntax, TokenNotInVocabulary

SPECIAL = "()|.*⋆"
STARS = "*⋆"


@dataclass(frozen=True)
class Lexeme:
    kind: str  # WORD ANY STAR WILD LPAREN RPAREN BAR
    text: str = ""


def tokenize_regex(source: str) -> list[Lexeme]:
    out: list[Lexeme] = []
    i = 0
    n = len(source)
    attached = False  # previous lexeme ended an atom with no whitespace since
    while i < n:
        ch = source[i]
        if ch.isspace():
            attached = False
            i += 1
        elif ch in STARS:
            out.append(Lexeme("STAR" if attached else "WILD"))
            attached = True
            i += 1
        elif ch == ".":
            out.append(Lexeme("ANY"))
            attached = True
            i += 1
        elif ch == "(":
            out.append(Lexeme("LPAREN"))
            attached = False
            i += 1
        elif ch == ")":
            out.append(Lexeme("RPAREN"))
            attached = True
            i += 1
        elif ch == "|":
            out.append(Lexeme("BAR"))
            attached = False
            i += 1
        else:
            word = []
            while i < n and not source[i].isspace() and source[i] not in SPECIAL:
                if source[i] == "\\":
                    if i + 1 == n:
                        raise RegexSyntax("dangling escape at end of expression")
                    i += 1
                word.append(source[i])
                i += 1
            out.append(Lexeme("WORD", "".join(word)))
            attached = True
    return out


# --- parse tree: ("word", tok) | ("any",) | ("star", node) | ("cat", [nodes]) | ("alt", [nodes])


class _Parser:
    def __init__(self, lexemes: list[Lexeme]):
        self.lx = lexemes
        self.pos = 0

    def peek(self) -> str | None:
        return self.lx[self.pos].kind if self.pos < len(self.lx) else None

    def parse(self):
        node = self.alt()
        if self.pos != len(self.lx):
            raise RegexSyntax(f"unexpected {self.lx[self.pos].kind} at lexeme {self.pos + 1}")
        return node

    def alt(self):
        branches = [self.cat()]
        while self.peek() == "BAR":
            self.pos += 1
            branches.append(self.cat())
        return branches[0] if len(branches) == 1 else ("alt", branches)

    def cat(self):
        items = []
        while self.peek() not in (None, "BAR", "RPAREN"):
            items.append(self.postfix())
        return ("cat", items)

    def postfix(self):
        node = self.atom()
        while self.peek() == "STAR":
            self.pos += 1
            node = ("star", node)
        return node

    def atom(self):
        kind = self.peek()
        lex = self.lx[self.pos]
        self.pos += 1
        if kind == "WORD":
            return ("word", lex.text)
        if kind == "ANY":
            return ("any",)
        if kind == "WILD":
            return ("star", ("any",))
        if kind == "LPAREN":
            node = self.alt()
            if self.peek() != "RPAREN":
                raise RegexSyntax("unbalanced '('")
            self.pos += 1
            return node
        raise RegexSyntax(f"unexpected {kind} at lexeme {self.pos}")


def parse_regex(source: str):
    lexemes = tokenize_regex(source)
    if not lexemes:
        raise RegexSyntax("empty expression")
    return _Parser(lexemes).parse()


@dataclass(frozen=True)
class Dfa:
    """Complete automaton over vocabulary indices: ``delta[state][v]``."""

    states: int
    start: int
    accepting: frozenset[int]
    delta: tuple[tuple[int, ...], ...]

    def run(self, items: Sequence[int]) -> int:
        s = self.start
        for v in items:
            s = self.delta[s][v]
        return s

    def accepts(self, items: Sequence[int]) -> bool:
        return self.run(items) in self.accepting


class _Nfa:
    ANY = -1

    def __init__(self):
        self.eps: list[list[int]] = []
        self.edges: list[list[tuple[int, int]]] = []

    def state(self) -> int:
        self.eps.append([])
        self.edges.append([])
        return len(self.eps) - 1

    def build(self, node, index: dict[str, int]) -> tuple[int, int]:
        kind = node[0]
        if kind in ("word", "any"):
            a, b = self.state(), self.state()
            if kind == "any":
                label = self.ANY
            else:
                if node[1] not in index:
                    raise TokenNotInVocabulary(f"regex token {node[1]!r} is not in the vocabulary")
                label = index[node[1]]
            self.edges[a].append((label, b))
            return a, b
        if kind == "cat":
            a = b = self.state()
            for child in node[1]:
                ca, cb = self.build(child, index)
                self.eps[b].append(ca)
                b = cb
            return a, b
        if kind == "alt":
            a, b = self.state(), self.state()
            for child in node[1]:
                ca, cb = self.build(child, index)
                self.eps[a].append(ca)
                self.eps[cb].append(b)
            return a, b
        if kind == "star":
            a, b = self.state(), self.state()
            ca, cb = self.build(node[1], index)
            self.eps[a] += [ca, b]
            self.eps[cb] += [ca, b]
            return a, b
        raise AssertionError(kind)

    def closure(self, states) -> frozenset[int]:
        out = set(states)
        stack = list(states)
        while stack:
            s = stack.pop()
            for nxt in self.eps[s]:
                if nxt not in out:
                    out.add(nxt)
                    stack.append(nxt)
        return frozenset(out)


def compile_regex(source: str, vocabulary: Sequence[str]) -> Dfa:
    """Thompson construction, subset construction, then Moore minimization."""
    tree = parse_regex(source)
    index = {tok: v for v, tok in enumerate(vocabulary)}
    nfa = _Nfa()
    start, final = nfa.build(tree, index)
    n_sym = len(vocabulary)

    init = nfa.closure([start])
    ids = {init: 0}
    order = [init]
    delta: list[list[int]] = []
    while len(delta) < len(order):
        cur = order[len(delta)]
        row = []
        for v in range(n_sym):
            moved = [b for s in cur for label, b in nfa.edges[s] if label == v or label == nfa.ANY]
            nxt = nfa.closure(moved)
            if nxt not in ids:
                ids[nxt] = len(order)
                order.append(nxt)
            row.append(ids[nxt])
        delta.append(row)
    accepting = {i for i, st in enumerate(order) if final in st}
    return _minimize(len(order), 0, accepting, delta)


def _minimize(n: int, start: int, accepting: set[int], delta: list[list[int]]) -> Dfa:
    block = [1 if s in accepting else 0 for s in range(n)]
    while True:
        sig = {}
        new_block = []
        for s in range(n):
            key = (block[s], tuple(block[t] for t in delta[s]))
            new_block.append(sig.setdefault(key, len(sig)))
        if len(sig) == len(set(block)):
            break
        block = new_block
    # renumber so the start state is 0 and states appear in BFS order
    rename = {block[start]: 0}
    queue = [start]
    reps = {block[start]: start}
    while queue:
        s = queue.pop(0)
        for t in delta[s]:
            if block[t] not in rename:
                rename[block[t]] = len(rename)
                reps[block[t]] = t
                queue.append(t)
    rows = [None] * len(rename)
    for b, rep in reps.items():
        rows[rename[b]] = tuple(rename[block[t]] for t in delta[rep])
    acc = frozenset(rename[block[s]] for s in accepting if block[s] in rename)
    return Dfa(len(rows), 0, acc, tuple(rows))
