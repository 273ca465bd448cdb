"""Result containers shared by the SAT miner and the brute-force oracle."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator


@dataclass(frozen=True)
class Pattern:
    """A mined sequence.

    ``items`` are vocabulary indices, ``chars`` the matching tokens.
    ``cover`` holds 1-based transaction ids; ``witness`` maps a covered
    transaction to one embedding (1-based positions).
    """

    chars: tuple[str, ...]
    support: int
    items: tuple[int, ...] = ()
    cover: frozenset[int] | None = None
    witness: dict[int, tuple[int, ...]] | None = field(default=None, compare=False)

    def __len__(self) -> int:
        return len(self.chars)

    def line(self) -> str:
        return f"{' '.join(self.chars)}\t{self.support}"

    def to_dict(self) -> dict:
        d = {"pattern": list(self.chars), "support": self.support}
        if self.cover is not None:
            d["cover"] = sorted(self.cover)
        if self.witness is not None:
            d["witness"] = {str(i): list(e) for i, e in sorted(self.witness.items())}
        return d


@dataclass
class PatternSet:
    patterns: list[Pattern]
    mode: str
    config: object = None
    solver_calls: int = 0
    conflicts: int = 0
    encode_time: float = 0.0
    solve_time: float = 0.0
    wall_time: float = 0.0

    def __len__(self) -> int:
        return len(self.patterns)

    def __iter__(self) -> Iterator[Pattern]:
        return iter(self.patterns)

    def as_dict(self) -> dict[tuple[str, ...], int]:
        """``{chars: support}``, the form used for set comparisons."""
        return {p.chars: p.support for p in self.patterns}

    def lines(self) -> list[str]:
        return [p.line() for p in self.patterns]

    def to_json(self, **kw) -> str:
        counters = {
            "solver_calls": self.solver_calls,
            "conflicts": self.conflicts,
            "encode_time": self.encode_time,
            "solve_time": self.solve_time,
            "wall_time": self.wall_time,
        }
        return json.dumps(
            {"mode": self.mode, "patterns": [p.to_dict() for p in self.patterns], "counters": counters},
            **kw,
        )


def is_subsequence(short, long) -> bool:
    it = iter(long)
    return all(x in it for x in short)
