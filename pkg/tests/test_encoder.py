import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seqsat.cnf import EPS, VarMap, blocking_clause_exact, decode_pattern
from seqsat.dataset import Dataset, MiningConfig, parse_dataset
from seqsat.encoder import encode, encode_base, encode_cardinality
from seqsat.exceptions import PartialGapTable
from seqsat.oracle import oracle_mine
from seqsat.solver import Solver, verify_model


def loaded(enc, extra=()):
    s = Solver(seed=0)
    s.ensure_vars(enc.varmap.total_vars)
    s.add_clauses(enc.cnf.clauses)
    s.add_clauses(extra)
    return s


def decoded_patterns(enc):
    """Every pattern some model of the formula decodes to."""
    s = loaded(enc)
    out = set()
    while s.solve():
        assert verify_model(enc.cnf.clauses, s.model)
        p = decode_pattern(s.model, enc.varmap)
        assert p.chars not in out
        out.add(p.chars)
        s.add_clause(blocking_clause_exact(p.items, enc.varmap, enc.K))
    return out


def frequent(dataset, **kw):
    return set(oracle_mine(dataset, MiningConfig(mode="all", **kw)).as_dict())


def feasible(dataset, pattern, **kw):
    """Can ``pattern`` be decoded from a model of the encoding for ``kw``?"""
    enc = encode(dataset, MiningConfig(mode="all", **kw))
    items = [dataset.token_index(t) for t in pattern.split()]
    pin = [enc.varmap.m[(k, v)] for k, v in enumerate(items, 1)]
    if len(items) < enc.K:
        pin.append(enc.varmap.m[(len(items) + 1, EPS)])
    return loaded(enc).solve(pin)


class TestBase:
    def test_fig1_model_satisfies(self, fig1):
        enc = encode(fig1, MiningConfig(minsup=2, mode="all"))
        vm = enc.varmap
        assert enc.K == 4
        a, b = fig1.token_index("A"), fig1.token_index("B")
        # T1 = B A C B, T2 = A C C B: AB embedded at (2,4) and (1,4)
        true = {vm.m[(1, a)], vm.m[(2, b)], vm.m[(3, EPS)], vm.m[(4, EPS)], vm.c[1], vm.c[2],
                vm.t[(1, 2, 1)], vm.t[(1, 4, 2)], vm.t[(2, 1, 1)], vm.t[(2, 4, 2)]}
        s = loaded(enc)
        assert s.solve(sorted(true))
        p = decode_pattern(s.model, vm, witness=True)
        assert p.chars == ("A", "B") and p.witness == {1: (2, 4), 2: (1, 4)}

    def test_padding_symmetry(self, fig1):
        enc = encode(fig1, MiningConfig(minsup=1, mode="all"))
        vm = enc.varmap
        assert not loaded(enc).solve([vm.m[(1, EPS)], vm.m[(2, 1)]])
        assert [-vm.m[(1, EPS)]] in enc.cnf.clauses

    def test_order_violated(self):
        assert not feasible(Dataset.from_sequences([["B", "A"]]), "A B", minsup=1)
        assert feasible(Dataset.from_sequences([["B", "A"]]), "B A", minsup=1)

    def test_clause_families_without_order(self, fig1):
        vm = encode(fig1, MiningConfig(minsup=1)).varmap
        unordered = len(encode_base(fig1, 4, vm, order=False))
        # order clauses: one per t(i, j, k) with k >= 2, i.e. 6 per transaction of length 4
        assert len(encode_base(fig1, 4, vm)) - unordered == 12

    def test_one_model_per_pattern(self, fig1):
        assert decoded_patterns(encode(fig1, MiningConfig(minsup=2, mode="all"))) == frequent(fig1, minsup=2)


class TestCardinality:
    def counter(self, n, minsup):
        vm = VarMap((), 1)
        cs = [vm.new_var(f"c_{i}") for i in range(1, n + 1)]
        vm.alloc_counter(n)
        return vm, cs, encode_cardinality(cs, minsup, vm)

    def c_models(self, n, minsup, assumptions=()):
        vm, cs, cnf = self.counter(n, minsup)
        s = Solver()
        s.ensure_vars(vm.total_vars)
        s.add_clauses(cnf.clauses)
        seen = set()
        while s.solve(assumptions):
            proj = tuple(s.model[c - 1] > 0 for c in cs)
            seen.add(proj)
            s.add_clause([-c if bit else c for c, bit in zip(cs, proj)])
        return seen

    def test_exactly_one_true_is_unsat_at_two(self):
        models = self.c_models(3, 2)
        assert all(sum(m) >= 2 for m in models)
        assert len(models) == 4

    def test_full_threshold_propagates(self):
        vm, cs, cnf = self.counter(4, 4)
        s = Solver()
        s.ensure_vars(vm.total_vars)
        s.add_clauses(cnf.clauses)
        # no search needed: every c_i is fixed at the top level
        assert all(s._val[2 * c] == 1 for c in cs)

    def test_c2_false_blocks_card3(self):
        vm, cs, cnf = self.counter(3, 1)
        s = Solver()
        s.ensure_vars(vm.total_vars)
        s.add_clauses(cnf.clauses)
        assert not s.solve([vm.card[3], -cs[1]])
        assert s.solve([vm.card[2], -cs[1]])

    @pytest.mark.parametrize("n", [1, 4, 6])
    def test_card_is_monotone(self, n):
        vm, cs, cnf = self.counter(n, 1)
        s = Solver()
        s.ensure_vars(vm.total_vars)
        s.add_clauses(cnf.clauses)
        for tau in range(1, n):
            assert not s.solve([vm.card[tau + 1], -vm.card[tau]])

    @pytest.mark.parametrize("n", range(1, 7))
    def test_counter_is_exact(self, n):
        vm, cs, cnf = self.counter(n, 1)
        for bits in itertools.product((False, True), repeat=n):
            s = Solver()
            s.ensure_vars(vm.total_vars)
            s.add_clauses(cnf.clauses)
            ok = s.solve([c if b else -c for c, b in zip(cs, bits)])
            # card(1) is asserted, so only the all-false assignment fails
            assert ok == any(bits)
            if not ok:
                continue
            for tau in range(1, n + 1):
                assert (s.model[vm.card[tau] - 1] > 0) == (sum(bits) >= tau)


class TestGap:
    def test_gap_fixture(self, gap_dataset):
        assert feasible(gap_dataset, "A B", minsup=2, max_gap=2)

    def test_gap_one_excludes_axb(self):
        d = Dataset.from_sequences([list("AxB")])
        assert not feasible(d, "A B", minsup=1, max_gap=1)
        assert feasible(d, "A B", minsup=1, max_gap=2)

    def test_vacuous_gap(self):
        d = parse_dataset("A B C A\nC A B\nB B A C\n")
        assert decoded_patterns(encode(d, MiningConfig(minsup=2, mode="all", max_gap=4))) == frequent(d, minsup=2)

    def test_dep_gap_per_character(self):
        d = Dataset.from_sequences([list("AxB")])
        table = {(p, t): 5 for p in (1, 2) for t in d.vocabulary}
        table[(1, "A")] = 1
        assert not feasible(d, "A B", minsup=1, dep_gap=table)
        table[(1, "A")] = 2
        assert feasible(d, "A B", minsup=1, dep_gap=table)

    def test_dep_gap_constant_matches_max_gap(self):
        d = parse_dataset("A B C A B\nC A A B\nB C A C B\n")
        table = {(p, t): 2 for p in range(1, 5) for t in d.vocabulary}
        by_table = decoded_patterns(encode(d, MiningConfig(minsup=2, mode="all", dep_gap=table)))
        by_gap = decoded_patterns(encode(d, MiningConfig(minsup=2, mode="all", max_gap=2)))
        assert by_table == by_gap == frequent(d, minsup=2, max_gap=2)

    def test_dep_gap_partial(self, fig1):
        with pytest.raises(PartialGapTable):
            encode(fig1, MiningConfig(minsup=1, dep_gap={(1, "A"): 1}))


class TestSpan:
    def test_abxxb(self):
        d = Dataset.from_sequences([list("ABxxB")])
        assert feasible(d, "A B", minsup=1, max_span=1)
        assert not feasible(d, "A B", minsup=1, max_span=0)
        assert feasible(d, "A", minsup=1, max_span=0)

    def test_axxb_threshold(self):
        d = Dataset.from_sequences([list("AxxB")])
        assert not feasible(d, "A B", minsup=1, max_span=2)
        assert feasible(d, "A B", minsup=1, max_span=3)

    def test_vacuous_span(self):
        d = parse_dataset("A B C A\nC A B\nB B A C\n")
        got = decoded_patterns(encode(d, MiningConfig(minsup=2, mode="all", max_span=4)))
        assert got == frequent(d, minsup=2)


class TestRegular:
    def test_prefix_expression(self):
        d = parse_dataset("A B A\nB A B\n")
        enc = encode(d, MiningConfig(minsup=1, mode="all", regex="A .*"))
        assert enc.K == 3
        assert not feasible(d, "B A", minsup=1, regex="A .*")
        assert feasible(d, "A B", minsup=1, regex="A .*")
        assert all(p[0] == "A" for p in decoded_patterns(enc))

    def test_universal_expression_changes_nothing(self, fig1):
        got = decoded_patterns(encode(fig1, MiningConfig(minsup=1, mode="all", regex="⋆")))
        assert got == frequent(fig1, minsup=1)

    def test_two_token_wildcard_with_gap(self):
        d = parse_dataset(
            "we study machine learning methods\n"
            "machine translation and deep learning\n"
            "learning machine models\n"
            "a machine learning survey\n"
        )
        kw = dict(minsup=2, regex="⋆ machine ⋆ learning ⋆", max_gap=2)
        got = decoded_patterns(encode(d, MiningConfig(mode="all", **kw)))
        assert got == frequent(d, **kw) == {("machine", "learning")}


@given(st.lists(st.text("ABC", min_size=1, max_size=5), min_size=1, max_size=5), st.data())
@settings(max_examples=40, deadline=None)
def test_models_match_oracle(seqs, data):
    d = Dataset.from_sequences([list(s) for s in seqs])
    minsup = data.draw(st.integers(1, len(seqs)))
    extra = data.draw(st.sampled_from([{}, {"max_gap": 1}, {"max_gap": 2}, {"max_span": 1}, {"max_span": 2}]))
    got = decoded_patterns(encode(d, MiningConfig(minsup=minsup, mode="all", **extra)))
    assert got == frequent(d, minsup=minsup, **extra)


def test_gap_equal_to_longest_transaction_is_unconstrained():
    d = parse_dataset("A B C A B C\nC B A\nA A B B\nC A\n")
    longest = max(d.lengths)
    for minsup in (1, 2, 3):
        assert decoded_patterns(encode(d, MiningConfig(minsup=minsup, mode="all", max_gap=longest))) == \
            decoded_patterns(encode(d, MiningConfig(minsup=minsup, mode="all")))


def test_card_assumption_never_enlarges():
    d = parse_dataset("A B C\nA C\nB C A\nC\n")
    enc = encode(d, MiningConfig(minsup=1, mode="all"))
    by_tau = []
    for tau in range(1, 5):
        s = loaded(enc)
        found = set()
        while s.solve([enc.varmap.card[tau]]):
            p = decode_pattern(s.model, enc.varmap)
            found.add(p.chars)
            s.add_clause(blocking_clause_exact(p.items, enc.varmap, enc.K))
        by_tau.append(found)
    assert all(later <= earlier for earlier, later in zip(by_tau, by_tau[1:]))
    assert by_tau[-1] == {("C",)}
    assert by_tau[0] == frequent(d, minsup=1)
