import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seqsat.exceptions import RegexSyntax, TokenNotInVocabulary
from seqsat.oracle import regex_matcher
from seqsat.regex import compile_regex, parse_regex, tokenize_regex

VOCAB = ("A", "B", "C")


def kinds(source):
    return [lx.kind for lx in tokenize_regex(source)]


class TestLexer:
    def test_standalone_and_attached_stars(self):
        assert kinds("⋆ A ⋆") == ["WILD", "WORD", "WILD"]
        assert kinds("A* .*") == ["WORD", "STAR", "ANY", "STAR"]
        assert kinds("(A B)*") == ["LPAREN", "WORD", "WORD", "RPAREN", "STAR"]

    def test_multichar_tokens_and_escape(self):
        lx = tokenize_regex(r"machine a\|b \.")
        assert [(x.kind, x.text) for x in lx] == [("WORD", "machine"), ("WORD", "a|b"), ("WORD", ".")]

    def test_dangling_escape(self):
        with pytest.raises(RegexSyntax):
            tokenize_regex("A \\")

    @pytest.mark.parametrize("source", ["", "(A", "A )", ")"])
    def test_syntax_errors(self, source):
        with pytest.raises(RegexSyntax):
            parse_regex(source)


class TestCompile:
    def test_single_token(self):
        dfa = compile_regex("A", ("A", "B"))
        # start, accept and a dead sink; two of them are live
        assert dfa.states == 3
        assert dfa.accepts([0])
        assert not dfa.accepts([]) and not dfa.accepts([1]) and not dfa.accepts([0, 0])

    def test_universal(self):
        dfa = compile_regex("⋆", VOCAB)
        assert dfa.states == 1 and dfa.accepting == frozenset({0})

    def test_prefix(self):
        dfa = compile_regex("A .*", VOCAB)
        assert dfa.accepts([0]) and dfa.accepts([0, 2, 1])
        assert not dfa.accepts([1, 0])

    def test_two_token_wildcard(self):
        dfa = compile_regex("⋆ machine ⋆ learning ⋆", ("learning", "machine", "x"))
        assert dfa.accepts([1, 0]) and dfa.accepts([2, 1, 2, 2, 0, 2])
        assert not dfa.accepts([0, 1]) and not dfa.accepts([1])

    def test_unknown_token(self):
        with pytest.raises(TokenNotInVocabulary):
            compile_regex("A Z", VOCAB)

    def test_complete_and_start_zero(self):
        dfa = compile_regex("(A | B C)* C", VOCAB)
        assert dfa.start == 0
        assert all(len(row) == len(VOCAB) for row in dfa.delta)
        assert all(0 <= s < dfa.states for row in dfa.delta for s in row)


def regex_strategy():
    atom = st.sampled_from(["A", "B", "C", ".", "⋆"])

    def extend(inner):
        return st.one_of(
            st.lists(inner, min_size=1, max_size=3).map(" ".join),
            st.lists(inner, min_size=2, max_size=3).map(lambda xs: "( " + " | ".join(xs) + " )"),
            inner.map(lambda x: f"( {x} )*"),
        )

    return st.recursive(atom, extend, max_leaves=6)


@given(regex_strategy())
@settings(max_examples=120, deadline=None)
def test_dfa_agrees_with_re_module(source):
    dfa = compile_regex(source, VOCAB)
    match = regex_matcher(source, VOCAB)
    for n in range(0, 5):
        for word in itertools.product(range(3), repeat=n):
            assert dfa.accepts(word) == match([VOCAB[v] for v in word]), (source, word)


@given(regex_strategy())
@settings(max_examples=60, deadline=None)
def test_dfa_is_minimal(source):
    dfa = compile_regex(source, VOCAB)
    # distinguish every pair of states by some suffix shorter than the state count
    suffixes = [w for n in range(dfa.states) for w in itertools.product(range(3), repeat=n)]

    def run_from(s, word):
        for v in word:
            s = dfa.delta[s][v]
        return s in dfa.accepting

    signatures = {tuple(run_from(s, w) for w in suffixes) for s in range(dfa.states)}
    assert len(signatures) == dfa.states
