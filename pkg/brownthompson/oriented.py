"""Planar graphs of F_3 diagrams and the oriented subgroup of F."""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

import networkx as nx

from .diagrams import TreeDiagram, eval_word, iota_diagram, iota_word, is_leaf, leaf_addresses, reduce
from .errors import NotConnected, WrongArity
from .utils.logging import get_logger
from .words import Word

logger = get_logger(__name__)


@dataclass(frozen=True)
class PlanarGraph:
    """Multigraph on the black regions of the strip picture."""

    vertex_count: int
    edges: Tuple[Tuple[int, int], ...]

    @staticmethod
    def x_coordinate(vertex: int) -> Fraction:
        return Fraction(-1, 2) + 2 * vertex

    def has_loop(self) -> bool:
        return any(u == v for u, v in self.edges)

    def to_networkx(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(range(self.vertex_count))
        graph.add_edges_from(self.edges)
        return graph


def _corner_edges(tree: tuple) -> List[Tuple[int, int]]:
    """One edge per internal node, joining its two black corner gaps.

    Gap a sits between leaf a and leaf a+1 (gap -1 left of everything);
    odd gaps are black and gap a is vertex (a+1)/2.
    """
    edges = []

    def _walk(node: tuple, offset: int) -> int:
        if is_leaf(node):
            return 1
        size = 0
        right_ends = []
        for child in node:
            size += _walk(child, offset + size)
            right_ends.append(offset + size - 1)
        corners = (offset - 1, right_ends[0], right_ends[1], right_ends[2])
        black = sorted((gap + 1) // 2 for gap in corners if gap % 2)
        if len(black) != 2:
            raise AssertionError(f"Caret at leaf {offset} has {len(black)} black corners")
        edges.append((black[0], black[1]))
        return size

    _walk(tree, 0)
    return edges


def planar_graph(diagram: TreeDiagram) -> PlanarGraph:
    if diagram.p != 3:
        raise WrongArity(3, diagram.p)
    vertex_count = (diagram.leaves + 1) // 2
    edges = _corner_edges(diagram.top) + _corner_edges(diagram.bottom)
    return PlanarGraph(vertex_count, tuple(edges))


def two_coloring(graph: PlanarGraph) -> Optional[List[int]]:
    """Proper +1/-1 coloring with vertex 0 colored +1, or None."""
    if graph.vertex_count == 0:
        return []
    if graph.has_loop():
        return None
    try:
        sides = nx.bipartite.color(graph.to_networkx())
    except nx.NetworkXError:
        return None
    return [1 if sides[v] == sides[0] else -1 for v in range(graph.vertex_count)]


def chromatic_at_two(graph: PlanarGraph) -> int:
    """Number of proper 2-colorings of a connected graph: 2 or 0."""
    if graph.vertex_count and not nx.is_connected(graph.to_networkx()):
        raise NotConnected(f"Planar graph with {graph.vertex_count} vertices is disconnected")
    return 2 if two_coloring(graph) is not None else 0


def theta_diagram(diagram: TreeDiagram) -> int:
    """theta of an element of F_2 given as a diagram."""
    return chromatic_at_two(planar_graph(iota_diagram(diagram))) // 2


def theta(word: Word) -> int:
    """1 iff the word evaluates into the oriented subgroup."""
    if word.p != 2:
        raise WrongArity(2, word.p)
    return chromatic_at_two(planar_graph(eval_word(iota_word(word)))) // 2


def parity_membership(diagram: TreeDiagram) -> bool:
    """Leafwise comparison of right-edge parities between the two trees."""
    if diagram.p != 2:
        raise WrongArity(2, diagram.p)
    diagram = reduce(diagram)
    top, bottom = leaf_addresses(diagram.top), leaf_addresses(diagram.bottom)
    return all(sum(a) % 2 == sum(b) % 2 for a, b in zip(top, bottom))


def to_dot(graph: PlanarGraph, name: str = "Gamma") -> str:
    """Undirected DOT text; vertices are filled by the 2-coloring when one exists."""
    coloring = two_coloring(graph)
    lines = [f"graph {name} {{"]
    for v in range(graph.vertex_count):
        attributes = f'label="v{v}"'
        if coloring is not None:
            fill = "white" if coloring[v] == 1 else "gray"
            sign = "+" if coloring[v] == 1 else "-"
            attributes = f'label="v{v} {sign}", style=filled, fillcolor={fill}'
        lines.append(f"  v{v} [{attributes}];  // x = {PlanarGraph.x_coordinate(v)}")
    for u, v in graph.edges:
        lines.append(f"  v{u} -- v{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
