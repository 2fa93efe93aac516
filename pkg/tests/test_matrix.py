import io
import math
from itertools import permutations

import numpy as np
import pytest
import scipy.optimize
from hypothesis import given, settings
from hypothesis import strategies as st

from swissrank import (ComparisonScale, IncompletePairwiseMatrix, ScaleError, build_matrix, builtin_scale,
                       circular_triads, comparison_graph, connected_components, consistency_defect,
                       parse_scale, solve_llsm)

from conftest import THREE_TEAMS, tournament_from
from generators import random_connected_pairs, random_matrix, random_tournament

HEADER = "round,team_a,team_b,points_a,points_b\n"

TABLE = {
    # winner points: PC1, PC2, PC3, PC4
    2.5: (2, 3, 3, 3),
    3.0: (3, 5, 4, 3),
    3.5: (4, 7, 5, 3),
    4.0: (5, 9, 6, 3),
}


class TestScales:
    @pytest.mark.parametrize("col, name", list(enumerate(["PC1", "PC2", "PC3", "PC4"])))
    def test_table_values(self, col, name):
        scale = builtin_scale(name)
        for points, row in TABLE.items():
            assert scale.ratio(points) == row[col]

    def test_examples(self):
        assert builtin_scale("PC2").ratio(3.5) == 7
        assert builtin_scale("pc4").ratio(4) == 3
        for name in ("PC1", "PC2", "PC3", "PC4"):
            assert builtin_scale(name).ratio(2) == 1

    def test_unknown(self):
        with pytest.raises(ScaleError, match="unknown scale"):
            builtin_scale("PC5")

    @pytest.mark.parametrize("name", ["PC1", "PC2", "PC3"])
    def test_monotone(self, name):
        values = builtin_scale(name).values()
        assert values == sorted(values)
        assert all(v > 1 for v in values)

    def test_pc4_constant(self):
        assert set(builtin_scale("PC4").values()) == {3.0}

    def test_custom_file(self):
        scale = parse_scale(io.StringIO("winner_points,ratio\n2.5,1.5\n3,2\n3.5,2.5\n4,3\n"))
        assert scale.ratio(3.5) == 2.5 and scale.ratio(2) == 1

    def test_custom_file_must_be_total(self):
        with pytest.raises(ScaleError, match="no ratio for winner points 4"):
            parse_scale(io.StringIO("winner_points,ratio\n2.5,1.5\n3,2\n3.5,2.5\n"))

    def test_custom_file_rejects_draw_row(self):
        with pytest.raises(ScaleError, match="must exceed"):
            parse_scale(io.StringIO("winner_points,ratio\n2,1\n"))

    def test_ratios_above_one(self):
        with pytest.raises(ScaleError, match="> 1"):
            ComparisonScale.from_points("bad", {2.5: 1.0, 3: 2, 3.5: 3, 4: 4})

    def test_other_board_counts(self):
        scale = ComparisonScale.from_points("six", {3.5: 2, 4: 3, 4.5: 4, 5: 5, 5.5: 6, 6: 7}, boards=6)
        assert scale.ratio(4.5) == 4 and scale.ratio(3) == 1


class TestBuildMatrix:
    def test_win_entry(self, triangle):
        m = build_matrix(triangle, builtin_scale("PC1"))
        aze, bul, ger = (triangle.index()[k] for k in ("AZE", "BUL", "GER"))
        assert m.entries[aze, bul] == 4 and m.entries[bul, aze] == 0.25
        assert m.entries[bul, ger] == 3
        assert m.entries[ger, aze] == 2

    def test_draw_entry(self):
        t = tournament_from("id,name\nGER,g\nISR,i\n", HEADER + "1,GER,ISR,2,2\n")
        m = build_matrix(t, builtin_scale("PC1"))
        assert m.entries[0, 1] == m.entries[1, 0] == 1

    def test_labels_follow_teams_file(self, three_team):
        assert build_matrix(three_team, builtin_scale("PC1")).labels == ("A", "B", "C")

    def test_repeats_aggregate_geometrically(self):
        t = tournament_from("id,name\nA,a\nB,b\n", HEADER + "1,A,B,2,2\n2,B,A,1,3\n", strict_swiss=False)
        m = build_matrix(t, builtin_scale("PC1"))
        assert m.entries[0, 1] == pytest.approx(math.sqrt(3), rel=1e-15)

    def test_aggregation_matches_duplicated_edge_objective(self):
        # double round robin: each pair meets twice, so the duplicated-edge
        # objective and the aggregated single-edge objective share a minimizer
        rng = np.random.default_rng(7)
        n = 5
        teams = "id,name\n" + "".join(f"T{i},t\n" for i in range(n))
        rows, rnd, logs = [], 0, []
        scale = builtin_scale("PC2")
        for leg in range(2):
            for i in range(n):
                for j in range(i + 1, n):
                    rnd += 1
                    ha = int(rng.integers(0, 9))
                    rows.append(f"{rnd},T{i},T{j},{ha / 2},{(8 - ha) / 2}\n")
                    ratio = 1.0 if ha == 4 else (scale.ratio(ha / 2) if ha > 4 else 1 / scale.ratio((8 - ha) / 2))
                    logs.append((i, j, math.log(ratio)))
        t = tournament_from(teams, HEADER + "".join(rows), strict_swiss=False)

        def duplicated(x_free):
            x = np.append(x_free, 0.0)
            return sum(2 * (r - x[i] + x[j]) ** 2 for i, j, r in logs)

        res = scipy.optimize.minimize(duplicated, np.zeros(n - 1), method="BFGS", options={"gtol": 1e-12})
        w = np.exp(np.append(res.x, 0.0))
        w /= w.sum()
        got = solve_llsm(build_matrix(t, scale)).as_array()
        np.testing.assert_allclose(got, w, atol=1e-7)

    def test_winner_points_outside_scale_domain(self):
        with pytest.raises(ScaleError, match="no ratio for winner points 5"):
            builtin_scale("PC1").ratio(5)

    def test_scale_board_count_must_match(self):
        t = tournament_from("id,name\nA,a\nB,b\n", HEADER + "1,A,B,3,1\n")
        with pytest.raises(ScaleError, match="for 6 boards"):
            build_matrix(t, ComparisonScale.from_points("six", {3.5: 2, 4: 3, 4.5: 4, 5: 5, 5.5: 6, 6: 7}, 6))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(2, 30), st.integers(0, 2**32 - 1), st.sampled_from(["PC1", "PC2", "PC3", "PC4"]))
    def test_entries_come_from_scale(self, n, seed, name):
        scale = builtin_scale(name)
        allowed = {1.0, *scale.values(), *(1 / v for v in scale.values())}
        m = build_matrix(random_tournament(np.random.default_rng(seed), n), scale)
        assert set(m.entries.values()) <= allowed
        for (i, j), a in m.entries.items():
            assert a * m.entries[j, i] == pytest.approx(1, rel=1e-12)


class TestMatrixType:
    def test_rejects_nonreciprocal(self):
        with pytest.raises(ValueError, match="not reciprocal"):
            IncompletePairwiseMatrix(("a", "b"), {(0, 1): 2.0, (1, 0): 0.6})

    def test_rejects_missing_reciprocal(self):
        with pytest.raises(ValueError, match="no reciprocal"):
            IncompletePairwiseMatrix(("a", "b"), {(0, 1): 2.0})

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError, match="positive"):
            IncompletePairwiseMatrix(("a", "b"), {(0, 1): -1.0, (1, 0): -1.0})

    def test_rejects_diagonal(self):
        with pytest.raises(ValueError, match="invalid entry"):
            IncompletePairwiseMatrix(("a", "b"), {(0, 0): 1.0})

    def test_dense(self):
        m = IncompletePairwiseMatrix.from_pairs("abc", {(0, 1): 2.0})
        dense = m.to_dense()
        assert dense[0, 1] == 2 and dense[1, 0] == 0.5 and np.isnan(dense[0, 2]) and dense[2, 2] == 1


class TestGraph:
    def test_path(self):
        m = IncompletePairwiseMatrix.from_pairs("abc", {(0, 1): 2.0, (1, 2): 3.0})
        g = comparison_graph(m)
        assert g.edges == {(0, 1), (1, 2)}
        assert connected_components(g) == [frozenset({0, 1, 2})]

    def test_two_components(self):
        m = IncompletePairwiseMatrix.from_pairs("abcd", {(0, 1): 2.0, (2, 3): 3.0})
        assert connected_components(comparison_graph(m)) == [frozenset({0, 1}), frozenset({2, 3})]

    def test_empty(self):
        g = comparison_graph(IncompletePairwiseMatrix(("a", "b", "c"), {}))
        assert g.edges == frozenset()
        assert len(connected_components(g)) == 3

    @settings(max_examples=80, deadline=None)
    @given(st.integers(1, 25), st.floats(0, 0.3), st.integers(0, 2**32 - 1))
    def test_components_partition(self, n, p, seed):
        rng = np.random.default_rng(seed)
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
        g = comparison_graph(IncompletePairwiseMatrix.from_pairs([str(i) for i in range(n)],
                                                                 {e: 2.0 for e in pairs}))
        parts = connected_components(g)
        owner = {}
        for k, part in enumerate(parts):
            for v in part:
                assert v not in owner
                owner[v] = k
        assert set(owner) == set(range(n))
        assert all(owner[i] == owner[j] for i, j in g.edges)
        # internally connected: a walk restricted to the part reaches every member
        adj = g.adjacency()
        for part in parts:
            start = min(part)
            seen, stack = {start}, [start]
            while stack:
                for u in adj[stack.pop()]:
                    if u not in seen:
                        seen.add(u)
                        stack.append(u)
            assert seen == part


def brute_defect(m: IncompletePairwiseMatrix) -> float:
    best = 0.0
    for i, j, k in permutations(range(m.n), 3):
        a_ij, a_jk, a_ik = m.get(i, j), m.get(j, k), m.get(i, k)
        if None not in (a_ij, a_jk, a_ik):
            best = max(best, abs(math.log(a_ik) - math.log(a_ij * a_jk)))
    return best


def brute_triads(m: IncompletePairwiseMatrix) -> set[tuple[int, int, int]]:
    found = set()
    for i, j, k in permutations(range(m.n), 3):
        a_ij, a_jk, a_ki = m.get(i, j), m.get(j, k), m.get(k, i)
        if None not in (a_ij, a_jk, a_ki) and a_ij > 1 and a_jk > 1 and a_ki > 1:
            rot = min((i, j, k), (j, k, i), (k, i, j))
            found.add(rot)
    return found


class TestConsistency:
    def test_consistent(self):
        m = IncompletePairwiseMatrix.from_pairs("abc", {(0, 1): 2.0, (1, 2): 2.0, (0, 2): 4.0})
        assert consistency_defect(m) == 0.0

    def test_triangle_defect(self, triangle):
        m = build_matrix(triangle, builtin_scale("PC1"))
        expected = brute_defect(m)
        assert expected == pytest.approx(math.log(24), rel=1e-14)
        assert consistency_defect(m) == pytest.approx(expected, rel=1e-14)

    def test_no_complete_triple(self):
        m = IncompletePairwiseMatrix.from_pairs("abcd", {(0, 1): 5.0, (1, 2): 3.0, (2, 3): 2.0})
        assert consistency_defect(m) == 0.0

    @settings(max_examples=40, deadline=None)
    @given(st.integers(3, 8), st.integers(0, 2**32 - 1))
    def test_against_enumeration(self, n, seed):
        rng = np.random.default_rng(seed)
        m = random_matrix(rng, random_connected_pairs(rng, n, extra=0.6), n)
        assert consistency_defect(m) == pytest.approx(brute_defect(m), rel=1e-12, abs=1e-15)


class TestTriads:
    def test_triangle(self, triangle):
        m = build_matrix(triangle, builtin_scale("PC1"))
        assert circular_triads(m) == [(0, 1, 2)]
        assert tuple(m.labels[v] for v in circular_triads(m)[0]) == ("AZE", "BUL", "GER")

    def test_transitive(self):
        t = tournament_from("id,name\nA,a\nB,b\nC,c\n", HEADER + "1,A,B,3,1\n2,B,C,3,1\n3,A,C,3,1\n")
        assert circular_triads(build_matrix(t, builtin_scale("PC1"))) == []

    def test_draw_breaks_cycle(self, three_team):
        assert circular_triads(build_matrix(three_team, builtin_scale("PC1"))) == []

    def test_reverse_orientation_is_canonical(self):
        # C beats B, B beats A, A beats C -> rotation starting at A is (A, C, B)
        t = tournament_from("id,name\nA,a\nB,b\nC,c\n", HEADER + "1,C,B,3,1\n2,B,A,3,1\n3,A,C,3,1\n")
        assert circular_triads(build_matrix(t, builtin_scale("PC1"))) == [(0, 2, 1)]

    @settings(max_examples=40, deadline=None)
    @given(st.integers(3, 9), st.integers(0, 2**32 - 1))
    def test_against_enumeration(self, n, seed):
        rng = np.random.default_rng(seed)
        m = random_matrix(rng, random_connected_pairs(rng, n, extra=0.7), n)
        got = circular_triads(m)
        assert len(got) == len(set(got))
        assert set(got) == brute_triads(m)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(3, 12), st.integers(0, 2**32 - 1))
    def test_consistent_has_no_triads(self, n, seed):
        rng = np.random.default_rng(seed)
        w = np.exp(rng.normal(size=n))
        pairs = random_connected_pairs(rng, n, extra=0.8)
        m = IncompletePairwiseMatrix.from_pairs([str(i) for i in range(n)],
                                                {(i, j): w[i] / w[j] for i, j in pairs})
        assert consistency_defect(m) < 1e-12
        assert circular_triads(m) == []
