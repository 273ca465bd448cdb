"""scikit-learn style front end.

>>> miner = SequenceMiner(minsup=2, mode="all").fit(["B A C B", "A C C B"])
>>> ("A", "B") in miner.patterns_.as_dict()
True
"""
from __future__ import annotations

from typing import Iterable

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .cnf import DEFAULT_SUBSEQUENCE_CAP
from .dataset import Dataset, MiningConfig, compute_k, resolve_minsup, stats
from .enumerator import mine
from .oracle import EmbeddingQuery, embeds, gaps_for


def check_sequences(X) -> list[list[str]]:
    """Normalize ``X`` to a list of token lists.

    Accepts a :class:`Dataset`, or an iterable whose items are either
    whitespace-separated strings or sequences of tokens.
    """
    if isinstance(X, Dataset):
        return X.sequences()
    if isinstance(X, (str, bytes)):
        raise TypeError("expected an iterable of sequences, got a single string")
    out = []
    for row in X:
        if isinstance(row, str):
            out.append(row.split())
        elif isinstance(row, Iterable):
            out.append([str(tok) for tok in row])
        else:
            raise TypeError(f"cannot read a sequence from {type(row).__name__}")
    if not out:
        raise ValueError("no sequences given")
    return out


def check_dataset(X) -> Dataset:
    return X if isinstance(X, Dataset) else Dataset.from_sequences(check_sequences(X))


class SequenceMiner(TransformerMixin, BaseEstimator):
    """Frequent flexible-sequence miner backed by a SAT solver.

    Parameters
    ----------
    minsup : int, float or str
        Absolute count, a fraction in (0, 1), or a percentage such as
        ``"5%"``. Fractions round up.
    mode : {"all", "closed", "maximal"}
    max_gap, max_span : int, optional
        Embedding constraints.
    dep_gap : dict, optional
        ``{(position, token): max_gap}`` for positions ``1..K-1``.
    regex : str, optional
        Pattern language restriction, see :mod:`seqsat.regex`.
    witness : bool
        Record one embedding per covered transaction.

    Attributes
    ----------
    patterns_ : PatternSet
    minsup_ : int
    k_ : int
    dataset_ : Dataset
    """

    def __init__(self, minsup=2, mode="closed", max_gap=None, dep_gap=None, max_span=None,
                 regex=None, witness=False, seed=None, solver_command=None,
                 subsequence_cap=DEFAULT_SUBSEQUENCE_CAP):
        self.minsup = minsup
        self.mode = mode
        self.max_gap = max_gap
        self.dep_gap = dep_gap
        self.max_span = max_span
        self.regex = regex
        self.witness = witness
        self.seed = seed
        self.solver_command = solver_command
        self.subsequence_cap = subsequence_cap

    def _config(self, dataset: Dataset) -> MiningConfig:
        config = MiningConfig(
            minsup=resolve_minsup(self.minsup, len(dataset)),
            max_gap=self.max_gap,
            dep_gap=self.dep_gap,
            max_span=self.max_span,
            regex=self.regex,
            mode=self.mode,
        )
        config.validate(dataset)
        return config

    def fit(self, X, y=None):
        dataset = check_dataset(X)
        config = self._config(dataset)
        self.patterns_ = mine(
            dataset, config, cap=self.subsequence_cap, witness=self.witness,
            seed=self.seed, solver_command=self.solver_command,
        )
        self.dataset_ = dataset
        self.config_ = config
        self.minsup_ = config.minsup
        self.k_ = compute_k(dataset, config.minsup)
        self.stats_ = stats(dataset)
        return self

    def transform(self, X) -> np.ndarray:
        """0/1 matrix: does sequence ``i`` embed mined pattern ``j`` under
        the fitted embedding constraints?"""
        check_is_fitted(self, "patterns_")
        seqs = [tuple(s) for s in check_sequences(X)]
        cfg = self.config_
        out = np.zeros((len(seqs), len(self.patterns_)), dtype=np.int8)
        for j, p in enumerate(self.patterns_):
            gaps = gaps_for(p.chars, cfg.max_gap, cfg.dep_gap)
            for i, s in enumerate(seqs):
                out[i, j] = embeds(EmbeddingQuery(p.chars, s, gaps, cfg.max_span))
        return out

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "patterns_")
        return np.asarray([" ".join(p.chars) for p in self.patterns_], dtype=object)
