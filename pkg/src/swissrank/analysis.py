"""Ranks from weights, Spearman correlation and ranking comparison reports."""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .llsm import WeightVector
from .ranks import RankVector, average_ranks
from .tournament import Tournament, format_points

WEIGHT_TIE_RTOL = 1e-12


def ranking_from_weights(w: WeightVector | Mapping[str, float]) -> RankVector:
    """Rank by descending weight; weights equal to 1e-12 relative share an average rank."""
    if isinstance(w, WeightVector):
        labels, weights = w.labels, list(w.weights)
    else:
        labels, weights = tuple(w), list(w.values())

    def same(a: float, b: float) -> bool:
        return math.isclose(a, b, rel_tol=WEIGHT_TIE_RTOL, abs_tol=0.0)

    return RankVector(tuple(labels), tuple(average_ranks(weights, same=same)))


@dataclass(frozen=True)
class CorrelationResult:
    coefficient: float
    n: int
    tie_adjusted: bool

    def __post_init__(self) -> None:
        if not -1 <= self.coefficient <= 1:
            raise ValueError(f"correlation {self.coefficient} outside [-1, 1]")


def _aligned(r1: RankVector, r2: RankVector) -> tuple[np.ndarray, np.ndarray]:
    if set(r1.labels) != set(r2.labels):
        only1 = sorted(set(r1.labels) - set(r2.labels))
        only2 = sorted(set(r2.labels) - set(r1.labels))
        raise ValueError(f"rankings cover different teams (only in first: {only1}, only in second: {only2})")
    other = r2.as_dict()
    return np.asarray(r1.ranks, dtype=float), np.asarray([other[k] for k in r1.labels], dtype=float)


def spearman(r1: RankVector, r2: RankVector,
             method: Literal["auto", "pearson"] = "auto") -> CorrelationResult:
    """
    Spearman's rank correlation of two rankings of the same teams.

    Tie-free inputs use 1 - 6 sum(d^2) / (n(n^2 - 1)). With ties (or with
    ``method="pearson"``) the Pearson correlation of the average-rank
    vectors is returned and ``tie_adjusted`` is set.
    """
    x, y = _aligned(r1, r2)
    n = len(x)
    if n < 2:
        raise ValueError("correlation needs at least two teams")
    if method == "auto" and r1.is_tie_free() and r2.is_tie_free():
        d2 = float(np.sum((x - y) ** 2))
        return CorrelationResult(1 - 6 * d2 / (n * (n * n - 1)), n, False)

    xc, yc = x - x.mean(), y - y.mean()
    denom = math.sqrt(float(xc @ xc) * float(yc @ yc))
    if denom == 0:
        raise ValueError("correlation undefined: a ranking has every team tied")
    rho = float(xc @ yc) / denom
    return CorrelationResult(min(1.0, max(-1.0, rho)), n, True)


@dataclass(frozen=True)
class CorrelationTable:
    names: tuple[str, ...]
    results: tuple[tuple[CorrelationResult, ...], ...]

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([[c.coefficient for c in row] for row in self.results])

    def __getitem__(self, pair: tuple[str, str]) -> CorrelationResult:
        a, b = pair
        return self.results[self.names.index(a)][self.names.index(b)]


def compare_rankings(rankings: Mapping[str, RankVector]) -> CorrelationTable:
    """Pairwise Spearman coefficients; symmetric with a unit diagonal."""
    names = tuple(rankings)
    if len(names) < 2:
        raise ValueError("need at least two rankings to compare")
    vectors = [rankings[k] for k in names]
    k = len(names)
    table: list[list[CorrelationResult | None]] = [[None] * k for _ in range(k)]
    for i in range(k):
        n = len(vectors[i])
        table[i][i] = CorrelationResult(1.0, n, not vectors[i].is_tie_free())
        for j in range(i + 1, k):
            table[i][j] = table[j][i] = spearman(vectors[i], vectors[j])
    return CorrelationTable(names, tuple(tuple(row) for row in table))  # type: ignore[arg-type]


@dataclass(frozen=True)
class Discrepancy:
    team: str
    rank_a: float
    rank_b: float

    @property
    def delta(self) -> float:
        return self.rank_b - self.rank_a


def discrepancy_report(a: RankVector, b: RankVector, threshold: float) -> list[Discrepancy]:
    """Teams whose rank differs by at least ``threshold``, largest shift first."""
    if threshold < 0:
        raise ValueError("threshold must be non-negative")
    x, y = _aligned(a, b)
    rows = [Discrepancy(team, float(ra), float(rb)) for team, ra, rb in zip(a.labels, x, y)
            if abs(rb - ra) >= threshold]
    order = {team: pos for pos, team in enumerate(a.labels)}
    return sorted(rows, key=lambda d: (-abs(d.delta), order[d.team]))


def outcome_labels(boards: int) -> list[str]:
    """Outcome bins from the most one-sided win down to the drawn match."""
    return [f"{format_points(h)}:{format_points(2 * boards - h)}"
            for h in range(2 * boards, boards - 1, -1)]


def result_distribution(t: Tournament) -> dict[str, int]:
    """Match count per outcome, keyed by the winner's score line ("2:2" for a draw)."""
    counts = dict.fromkeys(outcome_labels(t.boards), 0)
    for m in t.matches:
        hi, lo = max(m.half_a, m.half_b), min(m.half_a, m.half_b)
        counts[f"{format_points(hi)}:{format_points(lo)}"] += 1
    return counts


@dataclass(frozen=True)
class ScatterPoint:
    team: str
    rank_a: float
    rank_b: float


def scatter_data(a: RankVector, b: RankVector) -> list[ScatterPoint]:
    x, y = _aligned(a, b)
    return [ScatterPoint(team, float(ra), float(rb)) for team, ra, rb in zip(a.labels, x, y)]


def top(r: RankVector, k: int) -> list[str]:
    """Teams with rank at most ``k``."""
    return [team for team, rank in zip(r.labels, r.ranks) if rank <= k]


def positions(r: RankVector) -> Sequence[str]:
    """Team ids ordered best first (ties in label order)."""
    return [team for _, _, team in sorted((rk, pos, team) for pos, (team, rk) in enumerate(zip(r.labels, r.ranks)))]
