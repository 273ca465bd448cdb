"""Transactional sequence datasets: parsing, rendering, summary statistics,
and the mining configuration that travels with them."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .exceptions import (
    EmptyDataset,
    MalformedLine,
    MinsupOutOfRange,
    PartialGapTable,
    ReservedToken,
    SeqSatError,
    TokenNotInVocabulary,
)

EPSILON_TOKENS = ("ε", "<eps>")
MODES = ("all", "closed", "maximal")


@dataclass(frozen=True)
class Dataset:
    """Vocabulary plus ordered transactions of 0-based vocabulary indices."""

    vocabulary: tuple[str, ...]
    transactions: tuple[tuple[int, ...], ...]
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if not self.transactions:
            raise EmptyDataset("dataset has no transactions")
        if len(set(self.vocabulary)) != len(self.vocabulary):
            raise SeqSatError("vocabulary contains duplicate tokens")
        for tok in self.vocabulary:
            if tok in EPSILON_TOKENS:
                raise ReservedToken(f"token {tok!r} is reserved for padding")
        n = len(self.vocabulary)
        for i, t in enumerate(self.transactions):
            if not t:
                raise EmptyDataset(f"transaction {i + 1} is empty")
            if any(not 0 <= v < n for v in t):
                raise SeqSatError(f"transaction {i + 1} references an unknown index")

    @classmethod
    def from_sequences(cls, sequences: Iterable[Sequence], name: str | None = None) -> "Dataset":
        """Build a dataset from raw token sequences, assigning indices in
        first-appearance order."""
        index: dict[str, int] = {}
        transactions = []
        for seq in sequences:
            row = []
            for tok in seq:
                tok = str(tok)
                if tok in EPSILON_TOKENS:
                    raise ReservedToken(f"token {tok!r} is reserved for padding")
                if tok not in index:
                    index[tok] = len(index)
                row.append(index[tok])
            transactions.append(tuple(row))
        return cls(tuple(index), tuple(transactions), name)

    def __len__(self) -> int:
        return len(self.transactions)

    @property
    def lengths(self) -> list[int]:
        return [len(t) for t in self.transactions]

    def token_index(self, token: str) -> int:
        try:
            return self.vocabulary.index(token)
        except ValueError:
            raise TokenNotInVocabulary(f"token {token!r} does not occur in the dataset") from None

    def decode(self, indices: Iterable[int]) -> tuple[str, ...]:
        return tuple(self.vocabulary[v] for v in indices)

    def sequences(self) -> list[list[str]]:
        return [list(self.decode(t)) for t in self.transactions]


@dataclass(frozen=True)
class DatasetStats:
    transaction_count: int
    vocab_size: int
    max_length: int
    avg_length: float


@dataclass
class MiningConfig:
    """What to mine. ``minsup`` is always an absolute transaction count here.

    ``dep_gap`` maps ``(pattern position, token)`` to the largest distance
    allowed between that position's support and the next one.
    """

    minsup: int
    max_gap: int | None = None
    dep_gap: Mapping[tuple[int, str], int] | None = None
    max_span: int | None = None
    regex: str | None = None
    mode: str = "closed"

    @property
    def embedding_constrained(self) -> bool:
        return self.max_gap is not None or self.dep_gap is not None or self.max_span is not None

    @property
    def constrained(self) -> bool:
        return self.embedding_constrained or self.regex is not None

    def validate(self, dataset: Dataset) -> None:
        if not 1 <= self.minsup <= len(dataset):
            raise MinsupOutOfRange(
                f"minsup must lie in 1..{len(dataset)}, got {self.minsup}"
            )
        if self.mode not in MODES:
            raise SeqSatError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.max_gap is not None and self.max_gap < 1:
            raise SeqSatError("max_gap must be >= 1")
        if self.max_span is not None and self.max_span < 0:
            raise SeqSatError("max_span must be >= 0")
        if self.dep_gap is not None:
            if any(g < 1 for g in self.dep_gap.values()):
                raise SeqSatError("dependent gaps must be >= 1")
            check_gap_table(self.dep_gap, dataset, compute_k(dataset, self.minsup))


def parse_dataset(text: bytes | str, format: str = "tokens", name: str | None = None) -> Dataset:
    """Parse ``tokens`` (one whitespace-separated transaction per line, '#'
    comments) or ``spmf`` (integers, -1 closes an element, -2 a transaction)."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    if format == "tokens":
        rows = _parse_tokens(text)
    elif format == "spmf":
        rows = _parse_spmf(text)
    else:
        raise SeqSatError(f"unknown dataset format {format!r}")
    if not rows:
        raise EmptyDataset("dataset has no transactions")
    return Dataset.from_sequences(rows, name=name)


def _parse_tokens(text: str) -> list[list[str]]:
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        toks = line.split()
        if toks:
            rows.append(toks)
    return rows


def _parse_spmf(text: str) -> list[list[str]]:
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line[0] in "#%@":
            continue
        try:
            nums = [int(x) for x in line.split()]
        except ValueError:
            raise MalformedLine(f"line {lineno}: non-integer item") from None
        row: list[str] = []
        element: list[int] = []
        closed = False
        for x in nums:
            if closed:
                raise MalformedLine(f"line {lineno}: items after the -2 terminator")
            if x == -1:
                if len(element) != 1:
                    raise MalformedLine(
                        f"line {lineno}: elements must hold exactly one item, got {len(element)}"
                    )
                row.append(str(element[0]))
                element = []
            elif x == -2:
                if element:
                    raise MalformedLine(f"line {lineno}: element not closed by -1 before -2")
                closed = True
            elif x < 0:
                raise MalformedLine(f"line {lineno}: unknown sentinel {x}")
            else:
                element.append(x)
        if not closed:
            raise MalformedLine(f"line {lineno}: missing -2 terminator")
        if not row:
            raise MalformedLine(f"line {lineno}: empty transaction")
        rows.append(row)
    return rows


def render_dataset(dataset: Dataset, format: str = "tokens") -> str:
    lines = []
    for seq in dataset.sequences():
        if format == "tokens":
            lines.append(" ".join(seq))
        elif format == "spmf":
            if not all(tok.isdigit() for tok in seq):
                raise SeqSatError("spmf output needs non-negative integer tokens")
            lines.append(" ".join(f"{tok} -1" for tok in seq) + " -2")
        else:
            raise SeqSatError(f"unknown dataset format {format!r}")
    return "\n".join(lines) + "\n"


def compute_k(dataset: Dataset, minsup: int) -> int:
    """Longest possible frequent pattern: the minsup-th largest transaction length."""
    if not 1 <= minsup <= len(dataset):
        raise MinsupOutOfRange(f"minsup must lie in 1..{len(dataset)}, got {minsup}")
    return sorted(dataset.lengths, reverse=True)[minsup - 1]


def stats(dataset: Dataset) -> DatasetStats:
    lengths = dataset.lengths
    return DatasetStats(
        transaction_count=len(lengths),
        vocab_size=len(dataset.vocabulary),
        max_length=max(lengths),
        avg_length=sum(lengths) / len(lengths),
    )


def resolve_minsup(value: str | int | float, n_transactions: int) -> int:
    """Turn ``"5"``, ``"1%"`` or ``0.01`` into an absolute count.

    Percentages and fractions round up, so "at least" is never weakened.
    Range checking is left to :meth:`MiningConfig.validate`.
    """
    if isinstance(value, str):
        s = value.strip()
        if s.endswith("%"):
            try:
                pct = float(s[:-1])
            except ValueError:
                raise MinsupOutOfRange(f"bad minsup {value!r}") from None
            return math.ceil(pct * n_transactions / 100 - 1e-9)
        try:
            return int(s)
        except ValueError:
            try:
                value = float(s)
            except ValueError:
                raise MinsupOutOfRange(f"bad minsup {value!r}") from None
    if isinstance(value, float):
        if 0 < value < 1:
            return math.ceil(value * n_transactions - 1e-9)
        if not value.is_integer():
            raise MinsupOutOfRange(f"bad minsup {value!r}")
        return int(value)
    return int(value)


def load_gap_table(text: str) -> dict[tuple[int, str], int]:
    """Read ``position,token,maxgap`` rows (1-based positions)."""
    table = {}
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), 1):
        if not row or row[0].lstrip().startswith("#"):
            continue
        if len(row) != 3:
            raise MalformedLine(f"gap table line {lineno}: expected position,token,maxgap")
        pos, tok, gap = (x.strip() for x in row)
        if lineno == 1 and not pos.isdigit():
            continue  # header
        try:
            table[(int(pos), tok)] = int(gap)
        except ValueError:
            raise MalformedLine(f"gap table line {lineno}: non-integer field") from None
    return table


def check_gap_table(table: Mapping[tuple[int, str], int], dataset: Dataset, k: int) -> None:
    # gap(k, v) bounds the distance from position k to k+1, so position K is never read
    missing = [
        (pos, tok)
        for pos in range(1, k)
        for tok in dataset.vocabulary
        if (pos, tok) not in table
    ]
    if missing:
        pos, tok = missing[0]
        raise PartialGapTable(
            f"gap table has no entry for position {pos}, token {tok!r} "
            f"({len(missing)} missing in total)"
        )
