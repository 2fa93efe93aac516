"""Official lexicographic standings: match points, then board points, then TB3."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .ranks import Ranking
from .tournament import Tournament, format_points

WIN_MATCH_POINTS = 2
DRAW_MATCH_POINTS = 1


@dataclass(frozen=True)
class StandingRow:
    team: str
    match_points: int
    half_points: int
    tb3_half_points: int
    played: int = 0

    @property
    def board_points(self) -> float:
        return self.half_points / 2

    @property
    def tb3(self) -> float:
        return self.tb3_half_points / 2

    def key(self) -> tuple[int, int, int]:
        return self.match_points, self.half_points, self.tb3_half_points

    def describe(self) -> str:
        return (f"{self.team}: {self.match_points} MP, {format_points(self.half_points)} BP, "
                f"TB3 {format_points(self.tb3_half_points)}")


def _board_half_points(t: Tournament) -> dict[str, int]:
    totals = dict.fromkeys(t.ids, 0)
    for m in t.matches:
        totals[m.team_a] += m.half_a
        totals[m.team_b] += m.half_b
    return totals


def tb3(t: Tournament, team: str) -> float:
    """Sum of the tournament board points of every opponent faced, once per match."""
    t.team(team)
    totals = _board_half_points(t)
    return sum(totals[m.opponent_of(team)] for m in t.matches_of(team)) / 2


def official_standings(t: Tournament) -> Ranking[StandingRow]:
    """
    Rank teams by (match points, board points, TB3), all descending.

    Teams still level after TB3 share an average rank; they are listed in
    teams-file order.
    """
    bp = _board_half_points(t)
    mp: dict[str, int] = dict.fromkeys(t.ids, 0)
    opp: dict[str, int] = defaultdict(int)
    played: dict[str, int] = defaultdict(int)
    for m in t.matches:
        winner = m.winner()
        if winner is None:
            mp[m.team_a] += DRAW_MATCH_POINTS
            mp[m.team_b] += DRAW_MATCH_POINTS
        else:
            mp[winner] += WIN_MATCH_POINTS
        opp[m.team_a] += bp[m.team_b]
        opp[m.team_b] += bp[m.team_a]
        played[m.team_a] += 1
        played[m.team_b] += 1

    rows = [StandingRow(tid, mp[tid], bp[tid], opp[tid], played[tid]) for tid in t.ids]
    index = t.index()
    return Ranking.from_rows(rows, key=StandingRow.key, order=lambda r: index[r.team])
