"""Tests for the command-line front-end."""

import orjson
import pytest

import cli


def run(capsys, *argv):
    """Run the CLI and return (exit code, stdout)."""
    code = cli.run(list(argv))
    return code, capsys.readouterr().out


def test_normalize(capsys):
    """Test the normalize command."""
    code, out = run(capsys, "normalize", "-p", "5", "x1 x100^-1 x50 x1^-1 x100 x46^-1")

    assert code == cli.EXIT_OK
    assert orjson.loads(out) == {
        "normal": "x96 x46 x1 x1^-1 x46^-1 x96^-1",
        "tau": [3, 6, 2, 4, 1, 5],
        "steps": 8,
    }


def test_eval_text(capsys):
    """Test the eval command with the abelian image."""
    code, out = run(capsys, "eval", "--abelian", "y0")

    assert code == cli.EXIT_OK
    assert out.splitlines() == ["((**)*)|(*(**))", "abelian 1 -1"]


def test_eval_json(capsys):
    """Test eval as JSON with a rectangular membership test."""
    code, out = run(capsys, "eval", "--format", "json", "--rect", "2", "2", "y0 y0")
    record = orjson.loads(out)

    assert code == cli.EXIT_OK
    assert record["p"] == 2
    assert record["abelian"] == [2, -2]
    assert record["rect"] == 1


@pytest.mark.parametrize("word,expected", [("y0 y1", "1"), ("y0", "0"), ("", "1")])
def test_member_oriented(capsys, word, expected):
    """Test oriented-subgroup membership."""
    code, out = run(capsys, "member", "--oriented", word)

    assert code == cli.EXIT_OK
    assert out.strip() == expected


def test_member_rect(capsys):
    """Test rectangular membership on its own."""
    code, out = run(capsys, "member", "--rect", "2", "1", "y0")

    assert code == cli.EXIT_OK
    assert out.strip() == "0"


def test_graph(capsys):
    """Test DOT output for a lifted F_2 word and for an F_3 word."""
    code, out = run(capsys, "graph", "--dot", "y0")

    assert code == cli.EXIT_OK
    assert out.startswith("graph Gamma {")
    assert "v0 -- v2;" in out

    code, out = run(capsys, "graph", "-p", "3", "x0")
    assert "v0 -- v2;" in out


def test_moments_csv(capsys):
    """Test the second-moment table for theta."""
    code, out = run(capsys, "moments", "--state", "theta", "-d", "2", "-n", "1..9", "--format", "csv")
    lines = out.splitlines()

    assert code == cli.EXIT_OK
    assert lines[0].startswith("state,p,d,n,count")
    assert [int(line.split(",")[4]) for line in lines[1:]] == [4 * n - 2 for n in range(1, 10)]


def test_moments_json(capsys):
    """Test a gamma table as JSON."""
    code, out = run(capsys, "moments", "--state", "gamma", "-d", "4", "-n", "1..2", "--format", "json")
    table = orjson.loads(out)

    assert code == cli.EXIT_OK
    assert [row["count"] for row in table["rows"]] == [6, 28]


def test_moments_budget(capsys):
    """Test that refused cells give the budget exit code."""
    code, out = run(capsys, "moments", "--state", "gamma", "-d", "4", "-n", "3", "--engine", "brute", "--budget", "100")

    assert code == cli.EXIT_BUDGET
    assert "budget 100" in out


def test_bounds(capsys):
    """Test the bounds report at d = 2."""
    code, out = run(capsys, "bounds", "-d", "2", "-n", "10")
    records = orjson.loads(out)

    assert code == cli.EXIT_OK
    assert len(records) == 2
    assert all(record["verdicts"]["upper_printed"] == "fails" for record in records)


def test_rainbow(capsys):
    """Test the rainbow command."""
    code, out = run(capsys, "rainbow", "-d", "4")

    assert code == cli.EXIT_OK
    assert orjson.loads(out) == {"{{1,2}, {3,4}}": 8, "{{1,3}, {2,4}}": 8, "{{1,4}, {2,3}}": 8}


def test_output_file(capsys, tmp_path):
    """Test writing command output to a file."""
    target = tmp_path / "trace.json"
    code, out = run(capsys, "-o", str(target), "normalize", "x0^-1 x0")

    assert code == cli.EXIT_OK
    assert out == ""
    assert orjson.loads(target.read_text())["tau"] == [2, 1]


def test_output_file_keeps_every_line(capsys, tmp_path):
    """Test that a command printing two verdicts writes both to the file."""
    target = tmp_path / "member.txt"
    code, out = run(capsys, "-o", str(target), "member", "--rect", "2", "1", "--oriented", "y0 y1")

    assert code == cli.EXIT_OK
    assert out == ""
    assert target.read_text().splitlines() == ["0", "1"]


@pytest.mark.parametrize("argv,expected", [
    ([], cli.EXIT_USAGE),
    (["normalize", "x-1"], cli.EXIT_USAGE),
    (["eval", "--abelian", "-p", "3", "x0"], cli.EXIT_USAGE),
    (["member", "y0"], cli.EXIT_USAGE),
    (["rainbow", "-d", "3"], cli.EXIT_USAGE),
    (["moments", "--state", "theta", "-p", "3", "-d", "2", "-n", "1"], cli.EXIT_USAGE),
    (["moments", "--state", "gamma", "-d", "2", "-n", "5..1"], cli.EXIT_USAGE),
    (["rainbow", "-d", "10"], cli.EXIT_BUDGET),
])
def test_exit_codes(capsys, argv, expected):
    """Test usage and budget failures."""
    assert cli.run(argv) == expected


def test_parse_range():
    """Test the A..B syntax."""
    assert cli.parse_range("3..5") == [3, 4, 5]
    assert cli.parse_range("7") == [7]


def test_verify_suite(capsys):
    """Test a quick run of one verification suite."""
    code, out = run(capsys, "verify", "--suite", "trees", "--max-length", "2", "--seed", "3")
    reports = orjson.loads(out)

    assert code == cli.EXIT_OK
    assert [report["suite"] for report in reports] == ["trees"]
    assert all(result["passed"] for result in reports[0]["results"])


@pytest.mark.slow
def test_verify_all(capsys):
    """Test every verification suite."""
    code, out = run(capsys, "verify", "--suite", "all", "--max-length", "3")

    assert code == cli.EXIT_OK
    assert [report["suite"] for report in orjson.loads(out)] == ["rewrite", "trees", "oriented", "moments"]
