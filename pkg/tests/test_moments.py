"""Tests for moments, permutation histograms and counting bounds."""

from fractions import Fraction

import pytest
from pydantic import ValidationError

from brownthompson.enumeration import count_neutral_brute
from brownthompson.errors import BudgetExceeded, PreconditionViolated
from brownthompson.moments import (
    bound_report,
    corrected_upper_bound,
    double_factorial,
    gamma_moment,
    lower_bound,
    lower_bound_threshold,
    moment_table,
    printed_upper_bound,
    rainbow_count,
    rainbow_table,
    second_theta_moment,
    tau_histogram,
    theta_moment,
    theta_moment_unnormalized,
)
from brownthompson.schemas import Engine, MomentRequest, State
from brownthompson.words import PairPartition

FOURTH_THETA = [6, 52, 176, 394]


@pytest.fixture
def theta_request():
    """Create the second-moment request for theta."""
    return MomentRequest(state=State.THETA, d=2, n_values=list(range(1, 10)))


# gamma

def test_gamma_small_moments():
    """Test the exact fourth moments for one and two generators."""
    assert gamma_moment(4, 1, 2) == Fraction(3, 2)
    assert gamma_moment(4, 1, 3) == Fraction(3, 2)
    assert gamma_moment(4, 2, 2) == Fraction(7, 4)
    assert gamma_moment(2, 5, 3) == 1
    assert gamma_moment(3, 2, 2) == 0


@pytest.mark.slow
def test_gamma_fourth_moment_approaches_three():
    """Test gamma(s_n^4) for n = 1, 2, 4, ..., 256 against the normal limit 3."""
    ns = [2 ** k for k in range(9)]
    values = dict(zip(ns, (gamma_moment(4, n, 2, Engine.MITM) for n in ns)))
    ordered = [values[n] for n in ns]

    assert all(later >= earlier for earlier, later in zip(ordered, ordered[1:]))
    assert values[256] > Fraction(5, 2)
    assert abs(values[256] - 3) < abs(values[16] - 3)


def test_gamma_fourth_moment_with_many_generators():
    """Test the meet-in-the-middle engine on larger n."""
    values = [gamma_moment(4, n, 2) for n in (16, 32, 64)]

    assert values[0] < values[1] < values[2] < 3
    assert values[2] > Fraction(5, 2)


# theta

def test_second_theta_moment():
    """Test c_n^2 = 4n - 2."""
    for n in range(1, 10):
        assert theta_moment_unnormalized(2, n) == second_theta_moment(n) == 4 * n - 2


def test_fourth_theta_moments():
    """Test the fourth moments for up to four generators."""
    counts = [theta_moment_unnormalized(4, n) for n in range(1, 5)]

    assert counts == FOURTH_THETA
    assert theta_moment(4, 2) == Fraction(52, 16)


def test_theta_fourth_moment_grows():
    """Test that theta(s_n^4) increases with n."""
    values = [Fraction(count, (2 * n) ** 2) for n, count in enumerate(FOURTH_THETA, start=1)]

    assert all(later > earlier for earlier, later in zip(values, values[1:]))


@pytest.mark.parametrize("d,expected", [(6, 20), (8, 70), (10, 252)])
def test_theta_single_generator(d, expected):
    """Test that with one generator only neutral words are oriented."""
    assert theta_moment_unnormalized(d, 1) == expected


def test_theta_sixth_moment():
    """Test c_2^6."""
    assert theta_moment_unnormalized(6, 2) == 506


@pytest.mark.slow
@pytest.mark.parametrize("n,expected", [(2, 5240), (3, 78962)])
def test_theta_eighth_moment(n, expected):
    """Test c_n^8 for two and three generators."""
    assert theta_moment_unnormalized(8, n) == expected


@pytest.mark.parametrize("d,n", [(1, 2), (3, 2), (5, 1)])
def test_odd_theta_moments_vanish(d, n):
    """Test that odd moments are zero."""
    assert theta_moment_unnormalized(d, n, Engine.BRUTE) == 0
    assert theta_moment(d, n) == 0


def test_theta_brute_matches_dp():
    """Test the two theta engines against each other."""
    assert theta_moment_unnormalized(4, 3, Engine.BRUTE) == theta_moment_unnormalized(4, 3, Engine.DP)


def test_theta_has_no_mitm_engine():
    """Test that theta refuses the meet-in-the-middle engine."""
    with pytest.raises(ValueError):
        theta_moment_unnormalized(2, 2, Engine.MITM)


# Tables

def test_theta_table(theta_request):
    """Test the second-moment table and its CSV form."""
    table = moment_table(theta_request)

    assert table.counts() == [4 * n - 2 for n in range(1, 10)]
    assert table.rows[1].value == Fraction(3, 2)

    lines = table.to_csv().splitlines()
    assert lines[0] == "state,p,d,n,count,normalized_value_num,normalized_value_den,error"
    assert lines[1] == "theta,2,2,1,2,1,1,"


def test_gamma_table_with_odd_d():
    """Test that odd gamma moments come out as zero rows."""
    table = moment_table(MomentRequest(state=State.GAMMA, p=3, d=3, n_values=[1, 2]))

    assert table.counts() == [0, 0]
    assert all(row.value == 0 for row in table.rows)


def test_budget_errors_stay_in_their_row():
    """Test that a refused cell is reported without a count."""
    request = MomentRequest(state=State.GAMMA, d=4, n_values=[1, 3], engine=Engine.BRUTE, budget=100)
    table = moment_table(request)

    assert table.rows[0].count == 6
    assert table.rows[1].count is None
    assert "budget 100" in table.rows[1].error
    assert table.to_csv().splitlines()[2].startswith("gamma,2,4,3,,,,")


@pytest.mark.parametrize("kwargs", [
    {"state": State.THETA, "p": 3, "d": 2, "n_values": [1]},
    {"state": State.THETA, "d": 2, "n_values": [1], "engine": Engine.MITM},
    {"state": State.GAMMA, "d": 2, "n_values": [0]},
    {"state": State.GAMMA, "d": 2, "n_values": []},
])
def test_invalid_requests(kwargs):
    """Test request validation."""
    with pytest.raises(ValidationError):
        MomentRequest(**kwargs)


def test_default_engines():
    """Test the engine chosen when none is given."""
    assert MomentRequest(state=State.GAMMA, d=2, n_values=[1]).resolved_engine == Engine.MITM
    assert MomentRequest(state=State.THETA, d=2, n_values=[1]).resolved_engine == Engine.DP


# Permutations and bounds

def test_tau_histogram_second_moment():
    """Test that both permutations of S_2 occur n times."""
    histogram = tau_histogram(2, 10, 2)

    assert histogram.counts == {(1, 2): 10, (2, 1): 10}
    assert histogram.total == 20
    assert histogram.to_model().counts == {"1 2": 10, "2 1": 10}


def test_tau_histogram_engines_agree():
    """Test the histogram from both word generators."""
    assert tau_histogram(4, 3, 2, "brute").counts == tau_histogram(4, 3, 2, "mitm").counts


def test_bound_formulas():
    """Test the binomial bounds at d = 2."""
    assert lower_bound_threshold(2, 2) == 19
    assert lower_bound(2, 20, 2) == 2
    assert printed_upper_bound(2, 10, 2) == 4
    assert corrected_upper_bound(2, 10, 2) == 16
    assert lower_bound(2, 5, 2) == 0


def test_bound_report_flags_printed_bound():
    """Test that the printed upper bound fails where the corrected one holds."""
    records = bound_report(tau_histogram(2, 10, 2))

    assert [record.tau for record in records] == [[1, 2], [2, 1]]
    for record in records:
        assert record.N == 10
        assert record.verdicts == {"lower": "skipped", "upper_printed": "fails", "upper_corrected": "holds"}
        assert record.trend == 1.0


def test_bound_report_lower_bound():
    """Test the lower bound once n passes its threshold."""
    records = bound_report(tau_histogram(2, 20, 2, "mitm"))

    assert all(record.lower == 2 for record in records)
    assert all(record.verdicts["lower"] == "holds" for record in records)
    assert all(record.verdicts["upper_corrected"] == "holds" for record in records)


def test_bound_report_covers_missing_permutations():
    """Test that permutations with no words are reported with N = 0."""
    records = bound_report(tau_histogram(4, 2, 2))

    assert len(records) == 24
    assert sum(record.N for record in records) == 28
    assert any(record.N == 0 for record in records)


@pytest.mark.slow
@pytest.mark.parametrize("d,n_max", [(2, 12), (4, 6)])
def test_bound_report_sweep(d, n_max):
    """Test that histograms add up and the corrected upper bound always holds."""
    for n in range(1, n_max + 1):
        histogram = tau_histogram(d, n, 2, "mitm")
        records = bound_report(histogram)

        assert histogram.total == count_neutral_brute(d, n, 2)
        assert sum(record.N for record in records) == histogram.total
        assert all(record.verdicts["upper_corrected"] == "holds" for record in records)
        assert all(record.verdicts["lower"] != "fails" for record in records)


@pytest.mark.slow
@pytest.mark.parametrize("n", range(20, 25))
def test_lower_bound_past_threshold(n):
    """Test the lower bound for every n from the threshold on."""
    records = bound_report(tau_histogram(2, n, 2, "mitm"))

    assert all(record.verdicts["lower"] == "holds" for record in records)
    assert all(record.N >= record.lower for record in records)


# Pair partitions

def test_double_factorial():
    """Test k!! on small values."""
    assert [double_factorial(k) for k in (-1, 0, 1, 3, 5, 7)] == [1, 1, 1, 3, 15, 105]


@pytest.mark.parametrize("d,partitions,count", [(2, 1, 2), (4, 3, 8), (6, 15, 48)])
def test_rainbow_count(d, partitions, count):
    """Test that every pair partition is sent to the rainbow equally often."""
    counts = rainbow_count(d)

    assert len(counts) == partitions == double_factorial(d - 1)
    assert set(counts.values()) == {count}


def test_rainbow_table():
    """Test the sorted rainbow table."""
    assert rainbow_table(2) == [(str(PairPartition.of((1, 2))), 2)]


def test_rainbow_count_limits():
    """Test the precondition and the factorial budget."""
    with pytest.raises(PreconditionViolated):
        rainbow_count(3)
    with pytest.raises(BudgetExceeded):
        rainbow_count(10)
