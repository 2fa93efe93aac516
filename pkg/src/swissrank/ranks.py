"""Rank vectors and the average-rank tie convention shared by every ranking."""

from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass
from typing import Any, Generic, TypeVar

K = TypeVar("K")
R = TypeVar("R")


def average_ranks(
        keys: Sequence[K],
        *,
        sort_key: Callable[[K], Any] | None = None,
        same: Callable[[K, K], bool] | None = None,
) -> list[float]:
    """
    Rank items in descending order of their keys; tied blocks share the mean rank.

    Args:
        keys: One comparable key per item.
        sort_key: Optional projection used for ordering.
        same: Equality predicate between neighbouring keys; defaults to ``==``.

    Returns:
        Ranks aligned with ``keys`` (1 is best).

    """
    proj = sort_key if sort_key is not None else (lambda k: k)
    eq = same if same is not None else (lambda a, b: a == b)
    order = sorted(range(len(keys)), key=lambda i: proj(keys[i]), reverse=True)

    ranks = [0.0] * len(keys)
    start = 0
    while start < len(order):
        stop = start + 1
        while stop < len(order) and eq(keys[order[stop - 1]], keys[order[stop]]):
            stop += 1
        # positions start..stop-1 are 0-based, ranks are 1-based
        value = (start + 1 + stop) / 2
        for pos in range(start, stop):
            ranks[order[pos]] = value
        start = stop
    return ranks


@dataclass(frozen=True)
class RankVector:
    """Rank values keyed by team id; ties carry average ranks."""

    labels: tuple[str, ...]
    ranks: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.labels) != len(self.ranks):
            raise ValueError("labels and ranks must have equal length")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate labels in rank vector")

    @classmethod
    def from_mapping(cls, ranks: Mapping[str, float]) -> RankVector:
        return cls(tuple(ranks), tuple(float(r) for r in ranks.values()))

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.labels, self.ranks))

    def __getitem__(self, label: str) -> float:
        return self.ranks[self.labels.index(label)]

    def __len__(self) -> int:
        return len(self.labels)

    def is_tie_free(self) -> bool:
        n = len(self.ranks)
        return sorted(self.ranks) == [float(i) for i in range(1, n + 1)]

    def reversed(self) -> RankVector:
        """The opposite order: rank r becomes n + 1 - r."""
        n = len(self.ranks)
        return RankVector(self.labels, tuple(n + 1 - r for r in self.ranks))


@dataclass(frozen=True)
class Ranking(Generic[R]):
    """
    A total preorder over teams.

    ``rows`` are sorted best first, each exposing a ``team`` attribute, and
    ``ranks`` is aligned with ``rows``.
    """

    rows: tuple[R, ...]
    ranks: tuple[float, ...]

    @classmethod
    def from_rows(
            cls,
            rows: Iterable[R],
            key: Callable[[R], Any],
            order: Callable[[R], Any] | None = None,
    ) -> Ranking[R]:
        """Sort rows by ``key`` descending, breaking display order with ``order`` ascending."""
        items = list(rows)
        ranks = average_ranks([key(r) for r in items])
        tiebreak = order if order is not None else (lambda r: 0)
        paired = sorted(zip(ranks, items), key=lambda p: (p[0], tiebreak(p[1])))
        return cls(tuple(r for _, r in paired), tuple(rk for rk, _ in paired))

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(zip(self.ranks, self.rows))

    @property
    def teams(self) -> tuple[str, ...]:
        return tuple(row.team for row in self.rows)  # type: ignore[attr-defined]

    def rank_of(self, team: str) -> float:
        return self.ranks[self.teams.index(team)]

    def row_of(self, team: str) -> R:
        return self.rows[self.teams.index(team)]

    def rank_vector(self) -> RankVector:
        return RankVector(self.teams, self.ranks)
