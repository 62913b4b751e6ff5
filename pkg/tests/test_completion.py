"""Tests for rebuilding neutral words from partial data."""

import random

import pytest

from brownthompson.completion import complete_from_positives, complete_from_tau, gap_condition_holds
from brownthompson.enumeration import neutral_words
from brownthompson.errors import PreconditionViolated
from brownthompson.words import PairPartition, WordSkeleton, format_word, normalize, parse_word


def skeleton(p, exponents, known, *pairs):
    return WordSkeleton(p, tuple(exponents), known, PairPartition.of(*pairs))


def tau_instance(rng, d, p):
    """A random permutation with forced exponents and well-separated indices."""
    tau = list(range(1, d + 1))
    rng.shuffle(tau)
    exponents = [1 if slot <= d // 2 else -1 for slot in tau]
    gap = (4 * p - 4) * d
    half = [gap + rng.randrange(50)]
    for _ in range(d // 2 - 1):
        half.append(half[-1] + gap + 1 + rng.randrange(50))
    return tau, exponents, half[::-1]


# From positive indices

@pytest.mark.parametrize("p", [2, 3, 5])
def test_nested_skeleton(p):
    """Test the completion of x_i^-1 x_j^-1 x_0^-1 x_3 x_0 x_1."""
    completion = complete_from_positives(
        skeleton(p, (-1, -1, -1, 1, 1, 1), {4: 3, 5: 0, 6: 1}, (1, 4), (2, 6), (3, 5))
    )

    assert completion.ok
    assert format_word(completion.word) == f"x{2 * p + 1}^-1 x1^-1 x0^-1 x3 x0 x1"


@pytest.mark.parametrize("p", [2, 3, 5])
def test_skeleton_without_completion(p):
    """Test a skeleton that no neutral word matches."""
    completion = complete_from_positives(
        skeleton(p, (-1, -1, -1, 1, 1, 1), {4: 3, 5: 0, 6: 1}, (1, 5), (2, 4), (3, 6))
    )

    assert not completion.ok
    assert completion.reason


def test_two_letter_skeleton():
    """Test that the negative letter copies its partner."""
    completion = complete_from_positives(skeleton(2, (1, -1), {1: 7}, (1, 2)))

    assert format_word(completion.word) == "x7 x7^-1"


def test_skeleton_validation():
    """Test malformed skeletons."""
    with pytest.raises(PreconditionViolated):
        skeleton(2, (1, 1), {1: 0, 2: 0}, (1, 2))
    with pytest.raises(PreconditionViolated):
        skeleton(2, (1, -1), {}, (1, 2))
    with pytest.raises(PreconditionViolated):
        skeleton(2, (1, -1, 1), {1: 0, 3: 0}, (1, 2))


@pytest.mark.parametrize("d,p", [
    (2, 2),
    (4, 2),
    (4, 3),
    pytest.param(6, 2, marks=pytest.mark.slow),
    pytest.param(6, 3, marks=pytest.mark.slow),
])
def test_round_trip_from_positives(d, p):
    """Test that every neutral word is recovered from its skeleton."""
    for word in neutral_words(d, 3, p):
        completion = complete_from_positives(WordSkeleton.from_word(word))
        assert completion.word == word, format_word(word)


# From the permutation

def test_tau_two_letters():
    """Test the shortest completion."""
    word = complete_from_tau([1, 2], [1, -1], [9], 2)

    assert format_word(word) == "x9 x9^-1"


def test_tau_identity():
    """Test that the identity permutation gives the palindrome itself."""
    word = complete_from_tau([1, 2, 3, 4], [1, 1, -1, -1], [100, 20], 2)

    assert format_word(word) == "x100 x20 x20^-1 x100^-1"


def test_tau_crossing_pairs():
    """Test a permutation whose letters cross under normalization."""
    word = complete_from_tau([4, 2, 1, 3], [-1, 1, 1, -1], [100, 20], 2)

    assert format_word(word) == "x99^-1 x20 x100 x20^-1"
    assert normalize(word).tau == (4, 2, 1, 3)


def test_tau_example_without_gap():
    """Test the six-letter example whose indices are too close for the gap condition."""
    tau = [3, 6, 2, 4, 1, 5]
    exponents = [1, -1, 1, -1, 1, -1]

    word = complete_from_tau(tau, exponents, [100, 50, 1], 5, check_gap=False)

    assert word == parse_word("x1 x100^-1 x50 x1^-1 x100 x46^-1", 5)
    with pytest.raises(PreconditionViolated):
        complete_from_tau(tau, exponents, [100, 50, 1], 5)


def test_gap_condition():
    """Test the gap condition itself."""
    assert gap_condition_holds([100, 20], 2, 4)
    assert not gap_condition_holds([100, 84], 2, 4)
    assert gap_condition_holds([5], 3, 2)


@pytest.mark.parametrize("tau,exponents,half", [
    ([1, 1], [1, -1], [3]),
    ([1, 2, 3], [1, -1, 1], [3]),
    ([2, 1], [1, -1], [3]),
    ([1, 2], [1, -1], [3, 4]),
])
def test_tau_preconditions(tau, exponents, half):
    """Test that malformed inputs are refused."""
    with pytest.raises(PreconditionViolated):
        complete_from_tau(tau, exponents, half, 2)


@pytest.mark.parametrize("d", [2, 4, 6, 8])
@pytest.mark.parametrize("p", [2, 3, 5])
def test_random_tau_completions(d, p):
    """Test random well-separated instances re-normalize to their permutation."""
    rng = random.Random(d * 100 + p)
    for _ in range(25):
        tau, exponents, half = tau_instance(rng, d, p)
        word = complete_from_tau(tau, exponents, half, p)
        trace = normalize(word)

        assert trace.tau == tuple(tau)
        assert [word[trace.tau_inverse[l] - 1].index for l in range(d // 2)] == half
