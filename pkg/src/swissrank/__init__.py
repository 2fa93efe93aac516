"""Rank Swiss-system team tournaments by logarithmic least squares on incomplete pairwise comparisons."""

from .analysis import (CorrelationResult, CorrelationTable, Discrepancy, ScatterPoint, compare_rankings,
                       discrepancy_report, ranking_from_weights, result_distribution, scatter_data, spearman)
from .llsm import (DisconnectedError, SolverFault, WeightVector, geometric_mean_weights, objective_value,
                   solve_llsm)
from .matrix import (BUILTIN_SCALES, ComparisonGraph, ComparisonScale, IncompletePairwiseMatrix, ScaleError,
                     build_matrix, builtin_scale, circular_triads, comparison_graph, connected_components,
                     consistency_defect, load_scale, parse_scale)
from .official import StandingRow, official_standings, tb3
from .ranks import Ranking, RankVector
from .tournament import (MatchResult, ParseError, Team, Tournament, TournamentError, ValidationError,
                         load_tournament, match_count_fraction, parse_tournament, start_ranking)

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_SCALES",
    "ComparisonGraph",
    "ComparisonScale",
    "CorrelationResult",
    "CorrelationTable",
    "Discrepancy",
    "DisconnectedError",
    "IncompletePairwiseMatrix",
    "MatchResult",
    "ParseError",
    "RankVector",
    "Ranking",
    "ScaleError",
    "ScatterPoint",
    "SolverFault",
    "StandingRow",
    "Team",
    "Tournament",
    "TournamentError",
    "ValidationError",
    "WeightVector",
    "build_matrix",
    "builtin_scale",
    "circular_triads",
    "compare_rankings",
    "comparison_graph",
    "connected_components",
    "consistency_defect",
    "discrepancy_report",
    "geometric_mean_weights",
    "load_scale",
    "load_tournament",
    "match_count_fraction",
    "objective_value",
    "official_standings",
    "parse_scale",
    "parse_tournament",
    "ranking_from_weights",
    "result_distribution",
    "scatter_data",
    "solve_llsm",
    "spearman",
    "start_ranking",
    "tb3",
]
