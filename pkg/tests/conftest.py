"""Shared fixtures, generators and brute-force helpers for the test suite."""
from __future__ import annotations

import itertools
import random

import pytest

from seqsat.dataset import Dataset, parse_dataset

FIG1_TEXT = "B A C B\nA C C B\n"
GAP_TEXT = "A C C B A B\nA B\n"

# Constraint variants used by the randomized corpus; "regex" variants are
# instantiated per dataset with two tokens drawn from its vocabulary.
VARIANTS = [
    {},
    {"max_gap": 1},
    {"max_gap": 2},
    {"max_gap": 3},
    {"max_span": 2},
    {"max_span": 4},
    {"max_gap": 2, "max_span": 4},
    "regex",
    "regex+gap",
]


def random_dataset(seed: int, n=(5, 30), vocab=(2, 5), max_len=12):
    """Random dataset and a minsup between 25% and 60% of its size."""
    rng = random.Random(seed)
    size = rng.randint(*n)
    letters = "ABCDE"[: rng.randint(*vocab)]
    seqs = [[rng.choice(letters) for _ in range(rng.randint(1, max_len))] for _ in range(size)]
    dataset = Dataset.from_sequences(seqs, name=f"random-{seed}")
    minsup = max(2, round(size * rng.uniform(0.25, 0.6)))
    return rng, dataset, minsup


def variant_for(seed: int, rng: random.Random, dataset: Dataset) -> dict:
    var = VARIANTS[seed % len(VARIANTS)]
    if not isinstance(var, str):
        return dict(var)
    vocab = dataset.vocabulary
    a, b = rng.sample(vocab, 2) if len(vocab) > 1 else (vocab[0], vocab[0])
    cons = {"regex": f"⋆ {a} ⋆ {b} ⋆"}
    if var == "regex+gap":
        cons["max_gap"] = 2
    return cons


def corpus(count: int, start: int = 0):
    """``(seed, dataset, minsup, constraints)`` for the randomized corpus."""
    for seed in range(start, start + count):
        rng, dataset, minsup = random_dataset(seed)
        yield seed, dataset, minsup, variant_for(seed, rng, dataset)


def truth_table_sat(nvars: int, clauses, assumptions=()):
    """Exhaustive decision; returns a satisfying assignment tuple or None."""
    units = [[a] for a in assumptions]
    for bits in itertools.product((False, True), repeat=nvars):
        if all(any(bits[abs(x) - 1] == (x > 0) for x in c) for c in itertools.chain(clauses, units)):
            return bits
    return None


def random_cnf(rng: random.Random, nvars: int, nclauses: int, width=(1, 4)):
    out = []
    for _ in range(nclauses):
        size = rng.randint(*width)
        vs = rng.sample(range(1, nvars + 1), min(size, nvars))
        out.append([v if rng.random() < 0.5 else -v for v in vs])
    return out


@pytest.fixture
def fig1():
    return parse_dataset(FIG1_TEXT, name="fig1")


@pytest.fixture
def gap_dataset():
    return parse_dataset(GAP_TEXT, name="gap")


@pytest.fixture
def write(tmp_path):
    def _write(name: str, text: str):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return _write
