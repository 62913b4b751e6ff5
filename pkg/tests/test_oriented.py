"""Tests for planar graphs, theta and the oriented subgroup."""

import itertools

import pytest
from hypothesis import given, settings

from brownthompson.diagrams import eval_word, generator_diagram, identity, iota_word, shift_right
from brownthompson.errors import NotConnected, WrongArity
from brownthompson.oriented import (
    PlanarGraph,
    chromatic_at_two,
    parity_membership,
    planar_graph,
    theta,
    theta_diagram,
    to_dot,
    two_coloring,
)
from brownthompson.words import Letter, Word, parse_word
from tests.strategies import words


def oriented_pair(i, m, j, n):
    """The two-letter words y_i^m y_j^n lying in the oriented subgroup."""
    if i == j and m == -n:
        return True
    return (j == i + 1 and m == n == 1) or (i == j + 1 and m == n == -1)


def all_f2_words(max_length, n):
    letters = [Letter(i, e) for i in range(n) for e in (1, -1)]
    for length in range(max_length + 1):
        for combination in itertools.product(letters, repeat=length):
            yield Word(combination, 2)


# Graph construction

def test_trivial_graph():
    """Test the graph of the identity."""
    graph = planar_graph(identity(3))

    assert graph.vertex_count == 1
    assert graph.edges == ()
    assert chromatic_at_two(graph) == 2


def test_first_generator_graph():
    """Test that x_0 in F_3 gives a triangle with a doubled edge."""
    graph = planar_graph(generator_diagram(0, 3))

    assert graph.vertex_count == 3
    assert sorted(graph.edges) == [(0, 1), (0, 1), (0, 2), (1, 2)]
    assert two_coloring(graph) is None
    assert chromatic_at_two(graph) == 0


def test_four_cycle_graph():
    """Test that y_0 y_1 lifts to an even cycle."""
    graph = planar_graph(eval_word(iota_word(parse_word("y0 y1"))))

    assert graph.vertex_count == 4
    assert sorted(graph.edges) == [(0, 1), (0, 1), (0, 3), (1, 2), (1, 2), (2, 3)]
    assert two_coloring(graph) == [1, -1, 1, -1]


@settings(max_examples=100)
@given(words(p=2, max_length=5, max_index=4))
def test_graph_shape(word):
    """Test vertex and edge counts of lifted diagrams."""
    diagram = eval_word(iota_word(word))
    graph = planar_graph(diagram)

    assert graph.vertex_count == (diagram.leaves + 1) // 2
    assert len(graph.edges) == 2 * diagram.carets
    assert all(0 <= u < graph.vertex_count and 0 <= v < graph.vertex_count for u, v in graph.edges)
    assert all(u <= v for u, v in graph.edges)


def test_planar_graph_needs_f3():
    """Test that F_2 diagrams are refused."""
    with pytest.raises(WrongArity):
        planar_graph(identity(2))


# Coloring

def test_two_coloring_rejects_loops_and_odd_cycles():
    """Test colorings of small hand-made graphs."""
    assert two_coloring(PlanarGraph(2, ((0, 0), (0, 1)))) is None
    assert two_coloring(PlanarGraph(3, ((0, 1), (1, 2), (0, 2)))) is None
    assert two_coloring(PlanarGraph(3, ((0, 1), (1, 2)))) == [1, -1, 1]


def test_two_coloring_edge_cases():
    """Test the empty graph, a single vertex and parallel edges."""
    assert two_coloring(PlanarGraph(0, ())) == []
    assert two_coloring(PlanarGraph(1, ())) == [1]
    assert two_coloring(PlanarGraph(2, ((0, 1), (0, 1)))) == [1, -1]


def test_disconnected_graph():
    """Test that a disconnected graph is reported."""
    with pytest.raises(NotConnected):
        chromatic_at_two(PlanarGraph(3, ((0, 1),)))


def test_dot_output():
    """Test the DOT rendering of a colorable graph."""
    dot = to_dot(planar_graph(eval_word(iota_word(parse_word("y0 y1")))))

    assert dot.startswith("graph Gamma {")
    assert "v0 -- v3;" in dot
    assert "fillcolor=gray" in dot
    assert "x = -1/2" in dot
    assert dot.rstrip().endswith("}")


def test_dot_output_uncolorable():
    """Test that uncolorable graphs are drawn without fill."""
    dot = to_dot(planar_graph(generator_diagram(0, 3)))

    assert "fillcolor" not in dot
    assert "v0 -- v2;" in dot


# theta

@pytest.mark.parametrize("text,expected", [
    ("", 1),
    ("y0 y1", 1),
    ("y1^-1 y0^-1", 1),
    ("y0", 0),
    ("y0 y0", 0),
    ("y0 y2", 0),
    ("y0 y1^-1", 0),
    ("y3 y3^-1", 1),
])
def test_theta(text, expected):
    """Test theta on short words."""
    assert theta(parse_word(text)) == expected


def test_theta_needs_f2():
    """Test that F_3 words are refused."""
    with pytest.raises(WrongArity):
        theta(parse_word("x0", 3))


def test_parity_membership():
    """Test the parity criterion on short words."""
    assert parity_membership(identity(2))
    assert parity_membership(eval_word(parse_word("y0 y1")))
    assert not parity_membership(generator_diagram(0, 2))
    assert not parity_membership(eval_word(parse_word("y0 y0")))


@pytest.mark.parametrize("max_length", [3, pytest.param(4, marks=pytest.mark.slow)])
def test_theta_agrees_with_parity(max_length):
    """Test both membership criteria on every short word over y_0..y_3."""
    for word in all_f2_words(max_length, 4):
        diagram = eval_word(word)
        assert theta(word) == int(parity_membership(diagram)), str(word)
        assert theta_diagram(diagram) == theta(word)


def test_two_letter_words():
    """Test which products of two generator powers are oriented."""
    for i, j in itertools.product(range(7), repeat=2):
        for m, n in itertools.product((1, -1), repeat=2):
            word = Word((Letter(i, m), Letter(j, n)), 2)
            assert theta(word) == int(oriented_pair(i, m, j, n)), str(word)


@settings(max_examples=50)
@given(words(p=2, max_length=4, max_index=4), words(p=2, max_length=4, max_index=4))
def test_oriented_subgroup_is_closed(u, v):
    """Test closure under products, inverses and shifts."""
    if theta(u) and theta(v):
        assert theta(u + v) == 1
    assert theta(u.inverse()) == theta(u)
    assert theta_diagram(shift_right(eval_word(u))) == theta(u)


def test_alpha_images_are_oriented():
    """Test that y_i y_(i+1) is oriented for every i."""
    for i in range(6):
        assert theta_diagram(eval_word(Word((Letter(i), Letter(i + 1)), 2))) == 1
