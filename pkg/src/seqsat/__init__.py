"""Frequent flexible-sequence mining through propositional satisfiability."""

__version__ = "0.1.0"

from .dataset import Dataset, DatasetStats, MiningConfig, compute_k, parse_dataset, stats
from .enumerator import mine, mine_all, mine_closed, mine_maximal
from .estimator import SequenceMiner
from .oracle import oracle_mine
from .patterns import Pattern, PatternSet
from .solver import Solver

__all__ = [
    "Dataset",
    "DatasetStats",
    "MiningConfig",
    "Pattern",
    "PatternSet",
    "SequenceMiner",
    "Solver",
    "compute_k",
    "mine",
    "mine_all",
    "mine_closed",
    "mine_maximal",
    "oracle_mine",
    "parse_dataset",
    "stats",
]
