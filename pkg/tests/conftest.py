import io

import pytest

from swissrank import parse_tournament

THREE_TEAMS = "id,name,seed\nA,Alpha,2600\nB,Beta,2550\nC,Gamma,2500\n"
THREE_RESULTS = "round,team_a,team_b,points_a,points_b\n1,A,B,3,1\n2,B,C,3,1\n3,A,C,2,2\n"

TRIANGLE_TEAMS = "id,name,seed\nAZE,Azerbaijan,2700\nBUL,Bulgaria,2650\nGER,Germany,2690\n"
TRIANGLE_RESULTS = (
    "round,team_a,team_b,points_a,points_b\n"
    "1,AZE,BUL,3.5,0.5\n"
    "2,BUL,GER,3,1\n"
    "3,GER,AZE,2.5,1.5\n"
)


def tournament_from(teams: str, results: str, **kwargs):
    return parse_tournament(io.StringIO(teams), io.StringIO(results), **kwargs)


@pytest.fixture
def three_team():
    """A beats B 3:1, B beats C 3:1, A draws C 2:2."""
    return tournament_from(THREE_TEAMS, THREE_RESULTS)


@pytest.fixture
def triangle():
    return tournament_from(TRIANGLE_TEAMS, TRIANGLE_RESULTS)


@pytest.fixture
def write_files(tmp_path):
    def _write(teams: str, results: str) -> tuple[str, str]:
        tp, rp = tmp_path / "teams.csv", tmp_path / "results.csv"
        tp.write_text(teams, encoding="utf-8")
        rp.write_text(results, encoding="utf-8")
        return str(tp), str(rp)
    return _write


def pytest_terminal_summary(terminalreporter):
    reports = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" in nodeid and rep.when in ("setup", "call"):
                if rep.when == "setup" and rep.passed:
                    continue
                reports.append((nodeid.split("::")[-1], "PASS" if rep.passed else "FAIL"))
    if not reports:
        return
    terminalreporter.section("acceptance criteria")
    for name, status in sorted(reports):
        terminalreporter.write_line(f"{status}  {name.removeprefix('test_')}")
