"""Teams, match results and ingestion of tournament CSV files."""

from __future__ import annotations

import csv
import io
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TextIO

from .ranks import Ranking

DEFAULT_BOARDS = 4
TOP_RATINGS = 4

TEAMS_FIXED = ("id", "name")
RESULTS_HEADER = ("round", "team_a", "team_b", "points_a", "points_b")


class TournamentError(ValueError):
    """Base class for ingestion failures; carries an optional source location."""

    def __init__(self, message: str, *, line: int | None = None, column: str | None = None,
                 source: str | None = None) -> None:
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        super().__init__(self._format())

    def _format(self) -> str:
        where = []
        if self.source:
            where.append(self.source)
        if self.line is not None:
            where.append(f"line {self.line}")
        if self.column is not None:
            where.append(f"column {self.column!r}")
        return f"{', '.join(where)}: {self.message}" if where else self.message


class ParseError(TournamentError):
    """A row that cannot be read: wrong arity, bad header, non-numeric cell."""


class ValidationError(TournamentError):
    """Well-formed data that violates a tournament invariant."""


@dataclass(frozen=True)
class Team:
    id: str
    name: str
    player_ratings: tuple[int, ...] | None = None
    seed_rating: float | None = None

    def __post_init__(self) -> None:
        if self.player_ratings is not None:
            if any(r < 0 for r in self.player_ratings):
                raise ValidationError(f"team {self.id}: negative player rating")
            if len(self.player_ratings) < TOP_RATINGS and self.seed_rating is None:
                raise ValidationError(
                    f"team {self.id}: {len(self.player_ratings)} ratings given, "
                    f"need at least {TOP_RATINGS} or a seed")

    @property
    def has_seed_data(self) -> bool:
        return self.seed_rating is not None or (
            self.player_ratings is not None and len(self.player_ratings) >= TOP_RATINGS)

    def seed_strength(self) -> float:
        """Mean of the four highest player ratings, or the precomputed seed."""
        if self.seed_rating is not None:
            return float(self.seed_rating)
        if self.player_ratings is None or len(self.player_ratings) < TOP_RATINGS:
            raise ValidationError(f"team {self.id}: no player ratings or seed rating")
        top = sorted(self.player_ratings, reverse=True)[:TOP_RATINGS]
        return sum(top) / TOP_RATINGS


@dataclass(frozen=True)
class MatchResult:
    """
    One team match. Board points are held as integer half-points so the
    grid and sum checks are exact; ``points_a``/``points_b`` give decimals.
    """

    round: int
    team_a: str
    team_b: str
    half_a: int
    half_b: int

    @classmethod
    def from_points(cls, round: int, team_a: str, team_b: str,
                    points_a: float | str, points_b: float | str) -> MatchResult:
        return cls(round, team_a, team_b, to_half_points(points_a), to_half_points(points_b))

    @property
    def points_a(self) -> float:
        return self.half_a / 2

    @property
    def points_b(self) -> float:
        return self.half_b / 2

    @property
    def is_draw(self) -> bool:
        return self.half_a == self.half_b

    @property
    def pair(self) -> frozenset[str]:
        return frozenset((self.team_a, self.team_b))

    def winner(self) -> str | None:
        if self.half_a > self.half_b:
            return self.team_a
        if self.half_b > self.half_a:
            return self.team_b
        return None

    def half_points_of(self, team: str) -> int:
        if team == self.team_a:
            return self.half_a
        if team == self.team_b:
            return self.half_b
        raise KeyError(team)

    def opponent_of(self, team: str) -> str:
        if team == self.team_a:
            return self.team_b
        if team == self.team_b:
            return self.team_a
        raise KeyError(team)

    def score_line(self) -> str:
        return f"{format_points(self.half_a)}:{format_points(self.half_b)}"


def to_half_points(value: float | str) -> int:
    """Convert a decimal board-point value to half-points; off-grid values raise."""
    try:
        frac = Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a number: {value!r}") from None
    doubled = frac * 2
    if doubled.denominator != 1:
        raise ValidationError(f"board points {value} are not on the half-point grid")
    return int(doubled)


def format_points(half: int) -> str:
    return str(half // 2) if half % 2 == 0 else f"{half // 2}.5"


@dataclass(frozen=True)
class Tournament:
    teams: tuple[Team, ...]
    matches: tuple[MatchResult, ...]
    rounds: int = 0
    boards: int = DEFAULT_BOARDS
    strict_swiss: bool = True
    _by_id: dict[str, Team] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        by_id: dict[str, Team] = {}
        for team in self.teams:
            if team.id in by_id:
                raise ValidationError(f"duplicate team id {team.id!r}")
            by_id[team.id] = team
        object.__setattr__(self, "_by_id", by_id)
        if self.boards < 1:
            raise ValidationError("board count must be positive")
        if self.rounds == 0 and self.matches:
            object.__setattr__(self, "rounds", max(m.round for m in self.matches))
        for m in self.matches:
            _check_match(m, by_id, self.boards)
        _check_schedule(self.matches, self.strict_swiss)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(t.id for t in self.teams)

    def team(self, team_id: str) -> Team:
        try:
            return self._by_id[team_id]
        except KeyError:
            raise KeyError(f"unknown team {team_id!r}") from None

    def index(self) -> dict[str, int]:
        return {t.id: i for i, t in enumerate(self.teams)}

    def matches_of(self, team_id: str) -> list[MatchResult]:
        self.team(team_id)
        return [m for m in self.matches if team_id in (m.team_a, m.team_b)]


def _check_match(m: MatchResult, by_id: dict[str, Team], boards: int, line: int | None = None) -> None:
    if m.round < 1:
        raise ValidationError(f"round must be positive, got {m.round}", line=line, column="round")
    for col, tid in (("team_a", m.team_a), ("team_b", m.team_b)):
        if tid not in by_id:
            raise ValidationError(f"unknown team id {tid!r}", line=line, column=col)
    if m.team_a == m.team_b:
        raise ValidationError(f"team {m.team_a} plays itself", line=line, column="team_b")
    for col, half in (("points_a", m.half_a), ("points_b", m.half_b)):
        if not 0 <= half <= 2 * boards:
            raise ValidationError(f"board points {format_points(half)} outside 0..{boards}",
                                  line=line, column=col)
    if m.half_a + m.half_b != 2 * boards:
        raise ValidationError(
            f"board points {m.score_line()} do not sum to {boards}", line=line, column="points_b")


def _check_schedule(matches: Sequence[MatchResult], strict_swiss: bool,
                    lines: Sequence[int] | None = None) -> None:
    seen_round: set[tuple[int, str]] = set()
    seen_pair: set[frozenset[str]] = set()
    for pos, m in enumerate(matches):
        line = lines[pos] if lines is not None else None
        for tid in (m.team_a, m.team_b):
            if (m.round, tid) in seen_round:
                raise ValidationError(f"team {tid} plays twice in round {m.round}", line=line)
            seen_round.add((m.round, tid))
        if strict_swiss and m.pair in seen_pair:
            raise ValidationError(
                f"pair {m.team_a}-{m.team_b} meets more than once (strict Swiss mode)", line=line)
        seen_pair.add(m.pair)


def _rows(source: TextIO) -> Iterator[tuple[int, list[str]]]:
    """Yield (line number, cells), skipping blank and ``#`` comment lines."""
    for lineno, raw in enumerate(source, start=1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        cells = next(csv.reader([text]))
        yield lineno, [c.strip() for c in cells]


def parse_teams(source: TextIO, *, name: str | None = None) -> tuple[Team, ...]:
    rows = _rows(source)
    try:
        lineno, header = next(rows)
    except StopIteration:
        raise ParseError("teams file is empty", source=name) from None
    if tuple(header[:2]) != TEAMS_FIXED or len(header) < 2:
        raise ParseError(f"teams header must start with 'id,name', got {','.join(header)!r}",
                         line=lineno, source=name)
    extra = header[2:]
    seeded = extra == ["seed"]
    if not seeded and not all(h.startswith("rating") for h in extra):
        raise ParseError("teams header must be 'id,name,seed' or 'id,name,rating1,...'",
                         line=lineno, source=name)

    teams: list[Team] = []
    ids: set[str] = set()
    for lineno, cells in rows:
        if len(cells) < 2 or len(cells) > len(header):
            raise ParseError(f"expected up to {len(header)} columns, got {len(cells)}",
                             line=lineno, source=name)
        tid, tname = cells[0], cells[1]
        if not tid:
            raise ParseError("empty team id", line=lineno, column="id", source=name)
        if tid in ids:
            raise ValidationError(f"duplicate team id {tid!r}", line=lineno, column="id", source=name)
        ids.add(tid)
        values = cells[2:]
        ratings: tuple[int, ...] | None = None
        seed: float | None = None
        if seeded:
            if values and values[0]:
                try:
                    seed = float(values[0])
                except ValueError:
                    raise ParseError(f"seed is not a number: {values[0]!r}",
                                     line=lineno, column="seed", source=name) from None
        else:
            parsed = []
            for col, value in zip(extra, values):
                if not value:
                    continue
                try:
                    parsed.append(int(value))
                except ValueError:
                    raise ParseError(f"rating is not an integer: {value!r}",
                                     line=lineno, column=col, source=name) from None
            ratings = tuple(parsed) if parsed else None
        try:
            teams.append(Team(tid, tname, ratings, seed))
        except ValidationError as exc:
            raise ValidationError(exc.message, line=lineno, source=name) from None
    return tuple(teams)


def parse_results(source: TextIO, teams: Iterable[Team], *, boards: int = DEFAULT_BOARDS,
                  strict_swiss: bool = True, name: str | None = None) -> tuple[MatchResult, ...]:
    by_id = {t.id: t for t in teams}
    rows = _rows(source)
    try:
        lineno, header = next(rows)
    except StopIteration:
        raise ParseError("results file is empty", source=name) from None
    if tuple(header) != RESULTS_HEADER:
        raise ParseError(f"results header must be {','.join(RESULTS_HEADER)!r}",
                         line=lineno, source=name)

    matches: list[MatchResult] = []
    lines: list[int] = []
    for lineno, cells in rows:
        if len(cells) != len(RESULTS_HEADER):
            raise ParseError(f"expected {len(RESULTS_HEADER)} columns, got {len(cells)}",
                             line=lineno, source=name)
        rnd, a, b, pa, pb = cells
        try:
            round_no = int(rnd)
        except ValueError:
            raise ParseError(f"round is not an integer: {rnd!r}",
                             line=lineno, column="round", source=name) from None
        halves = []
        for col, value in (("points_a", pa), ("points_b", pb)):
            try:
                halves.append(to_half_points(value))
            except TournamentError as exc:
                raise type(exc)(exc.message, line=lineno, column=col, source=name) from None
        m = MatchResult(round_no, a, b, halves[0], halves[1])
        try:
            _check_match(m, by_id, boards, line=lineno)
        except ValidationError as exc:
            raise ValidationError(exc.message, line=exc.line, column=exc.column, source=name) from None
        matches.append(m)
        lines.append(lineno)
    try:
        _check_schedule(matches, strict_swiss, lines)
    except ValidationError as exc:
        raise ValidationError(exc.message, line=exc.line, source=name) from None
    return tuple(matches)


def parse_tournament(teams_source: TextIO, results_source: TextIO, *,
                     boards: int = DEFAULT_BOARDS, strict_swiss: bool = True) -> Tournament:
    """
    Read a tournament from a teams CSV and a results CSV.

    Raises:
        ParseError: a malformed row, with its line number and column.
        ValidationError: unknown team id, self-play, off-grid points, points
            not summing to the board count, or a repeated pair in strict mode.

    """
    teams = parse_teams(teams_source, name=getattr(teams_source, "name", None))
    matches = parse_results(results_source, teams, boards=boards, strict_swiss=strict_swiss,
                            name=getattr(results_source, "name", None))
    return Tournament(teams, matches, boards=boards, strict_swiss=strict_swiss)


def load_tournament(teams_path, results_path, **kwargs) -> Tournament:
    with open(teams_path, encoding="utf-8") as tf, open(results_path, encoding="utf-8") as rf:
        return parse_tournament(tf, rf, **kwargs)


def write_teams(t: Tournament, out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    if any(team.seed_rating is not None for team in t.teams):
        writer.writerow(("id", "name", "seed"))
        for team in t.teams:
            writer.writerow((team.id, team.name,
                             "" if team.seed_rating is None else repr(team.seed_rating)))
        return
    width = max((len(team.player_ratings or ()) for team in t.teams), default=0)
    writer.writerow(("id", "name", *(f"rating{i}" for i in range(1, width + 1))))
    for team in t.teams:
        ratings = [str(r) for r in team.player_ratings or ()]
        writer.writerow((team.id, team.name, *ratings, *[""] * (width - len(ratings))))


def write_results(t: Tournament, out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(RESULTS_HEADER)
    for m in t.matches:
        writer.writerow((m.round, m.team_a, m.team_b, format_points(m.half_a), format_points(m.half_b)))


def dumps(t: Tournament) -> tuple[str, str]:
    """Serialize to (teams CSV, results CSV) strings."""
    teams, results = io.StringIO(), io.StringIO()
    write_teams(t, teams)
    write_results(t, results)
    return teams.getvalue(), results.getvalue()


def match_count_fraction(t: Tournament) -> tuple[int, int, float]:
    """Known compared pairs, all possible pairs n(n-1)/2, and their ratio."""
    known = len({m.pair for m in t.matches})
    n = len(t.teams)
    total = n * (n - 1) // 2
    return known, total, (known / total if total else 0.0)


@dataclass(frozen=True)
class SeedRow:
    team: str
    score: float


def start_ranking(t: Tournament) -> Ranking[SeedRow]:
    """Pre-tournament order by seed strength, descending; ties share average ranks."""
    rows = []
    for team in t.teams:
        if not team.has_seed_data:
            raise ValidationError(f"team {team.id}: no player ratings or seed rating")
        rows.append(SeedRow(team.id, team.seed_strength()))
    index = t.index()
    return Ranking.from_rows(rows, key=lambda r: r.score, order=lambda r: index[r.team])
