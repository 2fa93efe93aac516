"""Incomplete pairwise comparison matrices built from team match results."""

from __future__ import annotations

import csv
import math
from collections import defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import TextIO

import numpy as np

from .tournament import DEFAULT_BOARDS, Tournament, format_points, to_half_points

RECIPROCITY_RTOL = 1e-12

# winner board points -> ratio, for the four-board match
BUILTIN_SCALES: Mapping[str, Mapping[float, float]] = MappingProxyType({
    "PC1": {2.5: 2.0, 3.0: 3.0, 3.5: 4.0, 4.0: 5.0},
    "PC2": {2.5: 3.0, 3.0: 5.0, 3.5: 7.0, 4.0: 9.0},
    "PC3": {2.5: 3.0, 3.0: 4.0, 3.5: 5.0, 4.0: 6.0},
    "PC4": {2.5: 3.0, 3.0: 3.0, 3.5: 3.0, 4.0: 3.0},
})


class ScaleError(ValueError):
    pass


def winning_half_points(boards: int) -> list[int]:
    """All winner scores B/2 < b <= B on the half-point grid, as half-points."""
    return list(range(boards + 1, 2 * boards + 1))


@dataclass(frozen=True)
class ComparisonScale:
    """
    Maps a winner's board points to the ratio entered in the matrix.

    Draws always map to 1. ``ratios`` is keyed by half-points.
    """

    name: str
    ratios: Mapping[int, float]
    boards: int = DEFAULT_BOARDS
    draw_ratio: float = field(default=1.0, init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "ratios", MappingProxyType(dict(self.ratios)))
        missing = [h for h in winning_half_points(self.boards) if h not in self.ratios]
        if missing:
            raise ScaleError(f"scale {self.name}: no ratio for winner points "
                             f"{', '.join(format_points(h) for h in missing)}")
        for half, ratio in self.ratios.items():
            if not ratio > 1 or not math.isfinite(ratio):
                raise ScaleError(f"scale {self.name}: ratio for {format_points(half)} must be > 1")

    @classmethod
    def from_points(cls, name: str, ratios: Mapping[float, float],
                    boards: int = DEFAULT_BOARDS) -> ComparisonScale:
        return cls(name, {to_half_points(p): float(r) for p, r in ratios.items()}, boards)

    def ratio(self, winner_points: float) -> float:
        return self.ratio_half(to_half_points(winner_points))

    def ratio_half(self, winner_half: int) -> float:
        if winner_half == self.boards:
            return self.draw_ratio
        try:
            return self.ratios[winner_half]
        except KeyError:
            raise ScaleError(f"scale {self.name} has no ratio for winner points "
                             f"{format_points(winner_half)}") from None

    def values(self) -> list[float]:
        return [self.ratios[h] for h in sorted(self.ratios)]


def builtin_scale(name: str) -> ComparisonScale:
    """Return one of the four standard scales, PC1 to PC4 (case-insensitive)."""
    key = name.upper()
    if key not in BUILTIN_SCALES:
        raise ScaleError(f"unknown scale {name!r}; expected one of {', '.join(BUILTIN_SCALES)}")
    return ComparisonScale.from_points(key, BUILTIN_SCALES[key])


def parse_scale(source: TextIO, *, name: str = "custom", boards: int = DEFAULT_BOARDS) -> ComparisonScale:
    """Read a ``winner_points,ratio`` CSV. The draw row is implicit and may not be listed."""
    ratios: dict[int, float] = {}
    header_seen = False
    for lineno, raw in enumerate(source, start=1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        cells = [c.strip() for c in next(csv.reader([text]))]
        if not header_seen:
            if cells != ["winner_points", "ratio"]:
                raise ScaleError(f"line {lineno}: scale header must be 'winner_points,ratio'")
            header_seen = True
            continue
        if len(cells) != 2:
            raise ScaleError(f"line {lineno}: expected 2 columns, got {len(cells)}")
        try:
            half = to_half_points(cells[0])
            ratio = float(cells[1])
        except ValueError as exc:
            raise ScaleError(f"line {lineno}: {exc}") from None
        if half <= boards:
            raise ScaleError(f"line {lineno}: winner points must exceed {boards / 2:g}")
        if half in ratios:
            raise ScaleError(f"line {lineno}: duplicate winner points {cells[0]}")
        ratios[half] = ratio
    if not header_seen:
        raise ScaleError("scale file is empty")
    return ComparisonScale(name, ratios, boards)


def load_scale(path, *, boards: int = DEFAULT_BOARDS) -> ComparisonScale:
    with open(path, encoding="utf-8") as fh:
        return parse_scale(fh, name=f"custom:{path}", boards=boards)


@dataclass(frozen=True)
class IncompletePairwiseMatrix:
    """
    Positive reciprocal matrix with missing entries.

    ``entries`` holds both (i, j) and (j, i) for every known pair; the
    diagonal is implicitly 1 and never stored.
    """

    labels: tuple[str, ...]
    entries: Mapping[tuple[int, int], float]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))
        n = len(self.labels)
        for (i, j), a in self.entries.items():
            if i == j or not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"invalid entry index ({i}, {j})")
            if not (a > 0 and math.isfinite(a)):
                raise ValueError(f"entry ({i}, {j}) must be positive, got {a}")
            back = self.entries.get((j, i))
            if back is None:
                raise ValueError(f"entry ({i}, {j}) has no reciprocal")
            if abs(a * back - 1) > RECIPROCITY_RTOL:
                raise ValueError(f"entries ({i}, {j}) and ({j}, {i}) are not reciprocal")

    @classmethod
    def from_pairs(cls, labels: Iterable[str],
                   pairs: Mapping[tuple[int, int], float]) -> IncompletePairwiseMatrix:
        """Build from one ratio per unordered pair; reciprocals are filled in."""
        entries: dict[tuple[int, int], float] = {}
        for (i, j), a in pairs.items():
            entries[i, j] = a
            entries[j, i] = 1 / a
        return cls(tuple(labels), entries)

    @property
    def n(self) -> int:
        return len(self.labels)

    def get(self, i: int, j: int) -> float | None:
        if i == j:
            return 1.0
        return self.entries.get((i, j))

    def known_pairs(self) -> list[tuple[int, int]]:
        return sorted((i, j) for i, j in self.entries if i < j)

    def is_complete(self) -> bool:
        n = self.n
        return len(self.entries) == n * (n - 1)

    def neighbours(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in self.entries:
            adj[i].append(j)
        return [sorted(a) for a in adj]

    def to_dense(self):
        """Dense array with NaN for unknown entries."""
        out = np.full((self.n, self.n), np.nan)
        np.fill_diagonal(out, 1.0)
        for (i, j), a in self.entries.items():
            out[i, j] = a
        return out


def build_matrix(t: Tournament, scale: ComparisonScale) -> IncompletePairwiseMatrix:
    """
    Enter each match as a_ab = scale(winner points), a_ba = 1/a_ab; draws enter as 1.

    Teams are indexed in teams-file order. A pair that met more than once
    gets the geometric mean of its per-match ratios.
    """
    if scale.boards != t.boards:
        raise ScaleError(f"scale {scale.name} is for {scale.boards} boards, "
                         f"tournament has {t.boards}")
    index = t.index()
    ratios: dict[tuple[int, int], list[float]] = defaultdict(list)
    for m in t.matches:
        i, j = index[m.team_a], index[m.team_b]
        if m.half_a >= m.half_b:
            a = scale.ratio_half(m.half_a)
        else:
            a = 1 / scale.ratio_half(m.half_b)
        if i < j:
            ratios[i, j].append(a)
        else:
            ratios[j, i].append(1 / a)

    return IncompletePairwiseMatrix.from_pairs(
        t.ids, {pair: _geometric_mean(values) for pair, values in ratios.items()})


def _geometric_mean(values: list[float]) -> float:
    if len(values) == 1:
        return values[0]
    return math.exp(math.fsum(math.log(v) for v in values) / len(values))


@dataclass(frozen=True)
class ComparisonGraph:
    n: int
    edges: frozenset[tuple[int, int]]

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in sorted(self.edges):
            adj[i].append(j)
            adj[j].append(i)
        return adj

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)


def comparison_graph(m: IncompletePairwiseMatrix) -> ComparisonGraph:
    return ComparisonGraph(m.n, frozenset(m.known_pairs()))


def connected_components(g: ComparisonGraph) -> list[frozenset[int]]:
    """Maximal connected vertex sets, ordered by smallest member."""
    adj = g.adjacency()
    seen = [False] * g.n
    parts: list[frozenset[int]] = []
    for start in range(g.n):
        if seen[start]:
            continue
        seen[start] = True
        stack, part = [start], [start]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if not seen[u]:
                    seen[u] = True
                    stack.append(u)
                    part.append(u)
        parts.append(frozenset(part))
    return parts


def is_irreducible(m: IncompletePairwiseMatrix) -> bool:
    return len(connected_components(comparison_graph(m))) == 1


def _complete_triples(m: IncompletePairwiseMatrix):
    """Unordered triples i < j < k whose three pairs are all known."""
    adj = [set(a) for a in m.neighbours()]
    for i in range(m.n):
        for j in sorted(u for u in adj[i] if u > i):
            for k in sorted(u for u in adj[i] & adj[j] if u > j):
                yield i, j, k


def consistency_defect(m: IncompletePairwiseMatrix) -> float:
    """
    Largest |log a_ik - log(a_ij a_jk)| over all oriented triples with three
    known entries; 0 when there is no such triple.
    """
    worst = 0.0
    for i, j, k in _complete_triples(m):
        for p, q, r in ((i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)):
            dev = abs(math.log(m.entries[p, r]) - math.log(m.entries[p, q]) - math.log(m.entries[q, r]))
            worst = max(worst, dev)
    return worst


def circular_triads(m: IncompletePairwiseMatrix) -> list[tuple[int, int, int]]:
    """
    Triples where each alternative beats the next cyclically (entries > 1).

    Each triad is reported once, rotated to start at its smallest index.
    """
    found = []
    for i, j, k in _complete_triples(m):
        if m.entries[i, j] > 1 and m.entries[j, k] > 1 and m.entries[k, i] > 1:
            found.append((i, j, k))
        elif m.entries[i, k] > 1 and m.entries[k, j] > 1 and m.entries[j, i] > 1:
            found.append((i, k, j))
    return found
