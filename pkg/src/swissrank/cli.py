"""Command-line interface: ``swissrank validate|rank|official|compare|triads``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from collections.abc import Sequence
from dataclasses import dataclass
from itertools import combinations
from typing import Any, TextIO

from .analysis import compare_rankings, discrepancy_report, ranking_from_weights, scatter_data
from .llsm import DisconnectedError, SolverFault, solve_llsm
from .matrix import (ComparisonScale, ScaleError, build_matrix, builtin_scale, circular_triads,
                     comparison_graph, connected_components, consistency_defect, load_scale)
from .official import official_standings
from .ranks import RankVector
from .tournament import (DEFAULT_BOARDS, ParseError, Tournament, ValidationError, format_points,
                         load_tournament, match_count_fraction, start_ranking)

SCHEMA = "swissrank/1"

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_VALIDATION = 4
EXIT_SOLVER = 5

RANKING_NAMES = ("start", "final", "pc1", "pc2", "pc3", "pc4", "scale")


class CliError(Exception):
    def __init__(self, message: str, code: int, details: dict[str, Any] | None = None) -> None:
        super().__init__(message)
        self.code = code
        self.details = details or {}


@dataclass(frozen=True)
class RunConfig:
    teams_path: str
    results_path: str
    scale: str = "pc1"
    output_format: str = "csv"
    strict_swiss: bool = True
    boards: int = DEFAULT_BOARDS
    threshold: int = 6
    official_override: str | None = None

    def resolve_scale(self) -> ComparisonScale:
        sel = self.scale
        if sel.lower().startswith("custom:"):
            path = sel.split(":", 1)[1]
            try:
                return load_scale(path, boards=self.boards)
            except OSError as exc:
                raise CliError(f"cannot read scale file: {exc}", EXIT_IO) from exc
        if self.boards != DEFAULT_BOARDS:
            raise ScaleError(f"built-in scales are defined for {DEFAULT_BOARDS} boards; "
                             "use custom:<path>")
        return builtin_scale(sel)


def _load(cfg: RunConfig) -> Tournament:
    try:
        return load_tournament(cfg.teams_path, cfg.results_path,
                               boards=cfg.boards, strict_swiss=cfg.strict_swiss)
    except OSError as exc:
        raise CliError(f"cannot read input: {exc}", EXIT_IO) from exc


def _num(x: float) -> str:
    return repr(float(x))


def _rank(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


class Emitter:
    """Collects output sections and writes them as CSV blocks or one JSON document."""

    def __init__(self, command: str, fmt: str) -> None:
        self.command = command
        self.fmt = fmt
        self.sections: list[tuple[str, list[str], list[list[Any]]]] = []
        self.extra: dict[str, Any] = {}

    def table(self, name: str, header: list[str], rows: list[list[Any]]) -> None:
        self.sections.append((name, header, rows))

    def write(self, out: TextIO) -> None:
        if self.fmt == "json":
            doc: dict[str, Any] = {"schema": SCHEMA, "command": self.command}
            doc.update(self.extra)
            for name, header, rows in self.sections:
                doc[name] = [dict(zip(header, row)) for row in rows]
            out.write(json.dumps(doc, indent=2, ensure_ascii=False))
            out.write("\n")
            return
        writer = csv.writer(out, lineterminator="\n")
        many = len(self.sections) > 1
        for pos, (name, header, rows) in enumerate(self.sections):
            if many:
                if pos:
                    out.write("\n")
                out.write(f"# {name}\n")
            writer.writerow(header)
            writer.writerows(rows)


def load_override(path: str, t: Tournament) -> RankVector:
    """Read an external official order: CSV ``team,rank``."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [ln for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    except OSError as exc:
        raise CliError(f"cannot read override: {exc}", EXIT_IO) from exc
    reader = csv.reader(lines)
    header = [c.strip() for c in next(reader, [])]
    if header != ["team", "rank"]:
        raise ParseError("official override header must be 'team,rank'", source=path, line=1)
    ranks: dict[str, float] = {}
    for lineno, row in enumerate(reader, start=2):
        if len(row) != 2:
            raise ParseError(f"expected 2 columns, got {len(row)}", source=path, line=lineno)
        try:
            ranks[row[0].strip()] = float(row[1])
        except ValueError:
            raise ParseError(f"rank is not a number: {row[1]!r}", source=path, line=lineno,
                             column="rank") from None
    if set(ranks) != set(t.ids):
        raise ValidationError("official override does not list exactly the tournament's teams",
                              source=path)
    return RankVector(t.ids, tuple(ranks[tid] for tid in t.ids))


def _llsm_ranking(t: Tournament, scale: ComparisonScale) -> RankVector:
    return ranking_from_weights(solve_llsm(build_matrix(t, scale)))


def named_ranking(name: str, t: Tournament, cfg: RunConfig) -> RankVector:
    key = name.lower()
    if key == "start":
        return start_ranking(t).rank_vector()
    if key == "final":
        if cfg.official_override:
            return load_override(cfg.official_override, t)
        return official_standings(t).rank_vector()
    if key in ("pc1", "pc2", "pc3", "pc4"):
        return _llsm_ranking(t, builtin_scale(key))
    if key == "scale":
        return _llsm_ranking(t, cfg.resolve_scale())
    raise CliError(f"unknown ranking {name!r}; choose from {', '.join(RANKING_NAMES)}", EXIT_USAGE)


def cmd_validate(cfg: RunConfig, em: Emitter) -> int:
    t = _load(cfg)
    known, total, fraction = match_count_fraction(t)
    parts = connected_components(comparison_graph(build_matrix(t, cfg.resolve_scale())))
    connected = len(parts) == 1
    em.extra.update({"connected": connected, "known_pairs": known, "total_pairs": total})
    em.table("checks", ["check", "value"], [
        ["teams", len(t.teams)],
        ["matches", len(t.matches)],
        ["rounds", t.rounds],
        ["connected", "true" if connected else "false"],
        ["pairs", f"{known}/{total}"],
        ["fraction", f"{fraction:.4f}"],
    ])
    if not connected:
        em.table("components", ["component", "teams"],
                 [[k + 1, " ".join(t.ids[v] for v in sorted(p))] for k, p in enumerate(parts)])
        return EXIT_VALIDATION
    return EXIT_OK


def cmd_rank(cfg: RunConfig, em: Emitter) -> int:
    t = _load(cfg)
    scale = cfg.resolve_scale()
    matrix = build_matrix(t, scale)
    w = solve_llsm(matrix)
    ranks = ranking_from_weights(w)
    names = {team.id: team.name for team in t.teams}
    rows = sorted(zip(ranks.ranks, t.ids, w.weights))
    em.extra.update({"scale": scale.name, "objective_value": w.objective_value,
                     "residual_norm": w.residual_norm,
                     "consistency_defect": consistency_defect(matrix)})
    em.table("ranking", ["team", "name", "weight", "rank"],
             [[tid, names[tid], _num(weight), _rank(rank)] for rank, tid, weight in rows])
    return EXIT_OK


def cmd_official(cfg: RunConfig, em: Emitter) -> int:
    t = _load(cfg)
    standings = official_standings(t)
    names = {team.id: team.name for team in t.teams}
    em.table("standings", ["team", "name", "mp", "bp", "tb3", "rank"],
             [[row.team, names[row.team], row.match_points, format_points(row.half_points),
               format_points(row.tb3_half_points), _rank(rank)] for rank, row in standings])
    return EXIT_OK


def cmd_compare(cfg: RunConfig, em: Emitter, names: Sequence[str]) -> int:
    if len(names) < 2:
        raise CliError("compare needs at least two ranking names", EXIT_USAGE)
    t = _load(cfg)
    try:
        vectors = {name: named_ranking(name, t, cfg) for name in names}
    except ValidationError as exc:
        raise CliError(f"cannot compute ranking: {exc}", EXIT_VALIDATION) from exc
    if len(set(vectors)) < len(names):
        # repeated names collapse in the mapping; keep them distinct
        vectors = {f"{name}#{k + 1}": named_ranking(name, t, cfg) for k, name in enumerate(names)}
    table = compare_rankings(vectors)
    em.table("correlations", ["ranking", *table.names],
             [[a, *(f"{table[a, b].coefficient:.4f}" for b in table.names)] for a in table.names])

    disc_rows, scatter_rows = [], []
    for a, b in combinations(table.names, 2):
        for d in discrepancy_report(vectors[a], vectors[b], cfg.threshold):
            disc_rows.append([a, b, d.team, _rank(d.rank_a), _rank(d.rank_b), _rank(d.delta)])
        for p in scatter_data(vectors[a], vectors[b]):
            scatter_rows.append([a, b, p.team, _rank(p.rank_a), _rank(p.rank_b)])
    em.extra["threshold"] = cfg.threshold
    em.table("discrepancies", ["ranking_a", "ranking_b", "team", "rank_a", "rank_b", "delta"], disc_rows)
    em.table("scatter", ["ranking_a", "ranking_b", "team", "rank_a", "rank_b"], scatter_rows)
    return EXIT_OK


def cmd_triads(cfg: RunConfig, em: Emitter) -> int:
    t = _load(cfg)
    scale = cfg.resolve_scale()
    matrix = build_matrix(t, scale)
    ids = t.ids

    def scores(x: str, y: str) -> str:
        # from x's side, one entry per meeting
        lines = []
        for m in t.matches:
            if {m.team_a, m.team_b} == {x, y}:
                mine, theirs = m.half_points_of(x), m.half_points_of(y)
                lines.append(f"{format_points(mine)}:{format_points(theirs)}")
        return ";".join(lines)

    rows = []
    for i, j, k in circular_triads(matrix):
        a, b, c = ids[i], ids[j], ids[k]
        rows.append([a, b, c, scores(a, b), scores(b, c), scores(c, a),
                     _num(matrix.entries[i, j]), _num(matrix.entries[j, k]), _num(matrix.entries[k, i])])
    em.extra["scale"] = scale.name
    em.table("triads", ["team_1", "team_2", "team_3", "score_12", "score_23", "score_31",
                        "ratio_12", "ratio_23", "ratio_31"], rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--teams", required=True, help="teams CSV (id,name,rating1,... or id,name,seed)")
    common.add_argument("--results", required=True, help="results CSV (round,team_a,team_b,points_a,points_b)")
    common.add_argument("--scale", default="pc1", help="pc1|pc2|pc3|pc4|custom:<path> (default: pc1)")
    common.add_argument("--format", dest="output_format", choices=("csv", "json"), default="csv")
    common.add_argument("--no-strict-swiss", dest="strict_swiss", action="store_false",
                        help="allow a pair of teams to meet more than once")
    common.add_argument("--boards", type=int, default=DEFAULT_BOARDS)

    parser = argparse.ArgumentParser(prog="swissrank", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="check inputs and comparison-graph connectivity")
    sub.add_parser("rank", parents=[common], help="LLSM weights and ranks under a scale")
    sub.add_parser("official", parents=[common], help="official standings by MP, BP, TB3")
    p = sub.add_parser("compare", parents=[common], help="Spearman matrix, discrepancies and scatter data")
    p.add_argument("rankings", nargs="+", metavar="RANKING", help=", ".join(RANKING_NAMES))
    p.add_argument("--threshold", type=int, default=6, help="minimum rank shift to report (default: 6)")
    p.add_argument("--official-override", help="CSV team,rank used as the 'final' ranking")
    sub.add_parser("triads", parents=[common], help="circular triads with their score lines")
    return parser


def run(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE

    cfg = RunConfig(
        teams_path=args.teams,
        results_path=args.results,
        scale=args.scale,
        output_format=args.output_format,
        strict_swiss=args.strict_swiss,
        boards=args.boards,
        threshold=getattr(args, "threshold", 6),
        official_override=getattr(args, "official_override", None),
    )
    em = Emitter(args.command, cfg.output_format)
    buf = io.StringIO()
    try:
        cfg.resolve_scale()
        if args.command == "validate":
            code = cmd_validate(cfg, em)
        elif args.command == "rank":
            code = cmd_rank(cfg, em)
        elif args.command == "official":
            code = cmd_official(cfg, em)
        elif args.command == "compare":
            code = cmd_compare(cfg, em, args.rankings)
        else:
            code = cmd_triads(cfg, em)
    except CliError as exc:
        return _fail(err, cfg, args.command, str(exc), exc.code, exc.details)
    except ParseError as exc:
        return _fail(err, cfg, args.command, str(exc), EXIT_PARSE,
                     {"line": exc.line, "column": exc.column})
    except ScaleError as exc:
        return _fail(err, cfg, args.command, str(exc), EXIT_VALIDATION)
    except ValidationError as exc:
        return _fail(err, cfg, args.command, str(exc), EXIT_VALIDATION,
                     {"line": exc.line, "column": exc.column})
    except DisconnectedError as exc:
        return _fail(err, cfg, args.command, str(exc), EXIT_SOLVER,
                     {"components": [list(c) for c in exc.components]})
    except SolverFault as exc:
        return _fail(err, cfg, args.command, str(exc), EXIT_SOLVER)

    em.write(buf)
    out.write(buf.getvalue())
    if code != EXIT_OK:
        err.write(f"swissrank {args.command}: validation failed\n")
    return code


def _fail(err: TextIO, cfg: RunConfig, command: str, message: str, code: int,
          details: dict[str, Any] | None = None) -> int:
    if cfg.output_format == "json":
        doc = {"schema": SCHEMA, "command": command, "error": message, "exit_code": code}
        doc.update({k: v for k, v in (details or {}).items() if v is not None})
        err.write(json.dumps(doc, ensure_ascii=False) + "\n")
    else:
        err.write(f"swissrank {command}: error: {message}\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
