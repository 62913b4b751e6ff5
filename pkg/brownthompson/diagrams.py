"""Tree-diagram arithmetic for F_p.

A tree is a nested tuple: ``LEAF = ()`` and an internal node is the tuple
of its p children. A diagram (top, bottom) maps the leaf intervals of the
top tree onto those of the bottom tree; products follow f.g(t) = g(f(t)).
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, List, Optional, Sequence, Tuple

from .errors import ParseError, WrongArity
from .utils.logging import get_logger
from .words import Letter, Word

logger = get_logger(__name__)

Tree = tuple
LEAF: Tree = ()


def caret(p: int) -> Tree:
    return (LEAF,) * p


def is_leaf(tree: Tree) -> bool:
    return tree == LEAF


def leaf_count(tree: Tree) -> int:
    if is_leaf(tree):
        return 1
    return sum(leaf_count(child) for child in tree)


def internal_count(tree: Tree) -> int:
    if is_leaf(tree):
        return 0
    return 1 + sum(internal_count(child) for child in tree)


def _check_arity(tree: Tree, p: int) -> int:
    """Leaf count of ``tree``; raises if a node does not have p children."""
    if is_leaf(tree):
        return 1
    if len(tree) != p:
        raise ValueError(f"Internal node with {len(tree)} children in a {p}-ary tree")
    return sum(_check_arity(child, p) for child in tree)


def tree_to_string(tree: Tree) -> str:
    if is_leaf(tree):
        return "*"
    return "(" + "".join(tree_to_string(child) for child in tree) + ")"


def tree_from_string(text: str, p: int) -> Tree:
    """Inverse of tree_to_string."""
    position = 0

    def _node() -> Tree:
        nonlocal position
        if position >= len(text):
            raise ParseError(position, "", "Unexpected end of tree text")
        char = text[position]
        position += 1
        if char == "*":
            return LEAF
        if char != "(":
            raise ParseError(position - 1, char, f"Unexpected character {char!r} in tree text")
        children = []
        while position < len(text) and text[position] != ")":
            children.append(_node())
        if position >= len(text):
            raise ParseError(position, "", "Unclosed internal node")
        position += 1
        if len(children) != p:
            raise ParseError(position - 1, ")", f"Internal node has {len(children)} children, expected {p}")
        return tuple(children)

    tree = _node()
    if position != len(text):
        raise ParseError(position, text[position:], "Trailing characters after tree")
    return tree


def leaf_depths(tree: Tree) -> List[int]:
    if is_leaf(tree):
        return [0]
    return [depth + 1 for child in tree for depth in leaf_depths(child)]


def leaf_addresses(tree: Tree) -> List[Tuple[int, ...]]:
    """Child-index path from the root to every leaf, left to right."""
    if is_leaf(tree):
        return [()]
    return [(k,) + address for k, child in enumerate(tree) for address in leaf_addresses(child)]


def leaf_intervals(tree: Tree, p: int) -> List[Tuple[Fraction, Fraction]]:
    """The p-adic subintervals of [0, 1] cut out by the leaves."""
    intervals = []

    def _walk(node: Tree, lo: Fraction, width: Fraction):
        if is_leaf(node):
            intervals.append((lo, lo + width))
            return
        step = width / p
        for k, child in enumerate(node):
            _walk(child, lo + k * step, step)

    _walk(tree, Fraction(0), Fraction(1))
    return intervals


@dataclass(frozen=True)
class TreeDiagram:
    """A pair of p-ary trees with the same number of leaves."""

    p: int
    top: Tree
    bottom: Tree

    def __post_init__(self):
        if self.p < 2:
            raise ValueError(f"p must be at least 2, got {self.p}")
        top_leaves = _check_arity(self.top, self.p)
        bottom_leaves = _check_arity(self.bottom, self.p)
        if top_leaves != bottom_leaves:
            raise ValueError(f"Trees have {top_leaves} and {bottom_leaves} leaves")
        object.__setattr__(self, "_hash", hash((self.p, self.top, self.bottom)))

    def __hash__(self) -> int:
        # nested tuples do not cache their own hash
        return self._hash

    @property
    def leaves(self) -> int:
        return leaf_count(self.top)

    @property
    def carets(self) -> int:
        return internal_count(self.top)

    @property
    def is_trivial(self) -> bool:
        return is_leaf(reduce(self).top)

    def __str__(self) -> str:
        return format_diagram(self)


def identity(p: int) -> TreeDiagram:
    return TreeDiagram(p, LEAF, LEAF)


def format_diagram(diagram: TreeDiagram) -> str:
    return f"{tree_to_string(diagram.top)}|{tree_to_string(diagram.bottom)}"


def parse_diagram(text: str, p: int) -> TreeDiagram:
    top, separator, bottom = text.strip().partition("|")
    if not separator:
        raise ParseError(0, text, "Diagram text must look like 'top|bottom'")
    try:
        return TreeDiagram(p, tree_from_string(top, p), tree_from_string(bottom, p))
    except ValueError as e:
        raise ParseError(0, text, str(e)) from e


# Reduction

def _caret_starts(tree: Tree) -> List[int]:
    """First leaf index of every caret whose children are all leaves."""
    starts: List[int] = []

    def _walk(node: Tree, offset: int) -> int:
        if is_leaf(node):
            return 1
        if all(is_leaf(child) for child in node):
            starts.append(offset)
            return len(node)
        size = 0
        for child in node:
            size += _walk(child, offset + size)
        return size

    _walk(tree, 0)
    return starts


def _collapse(tree: Tree, starts: frozenset) -> Tree:
    def _walk(node: Tree, offset: int) -> Tuple[Tree, int]:
        if is_leaf(node):
            return node, 1
        if all(is_leaf(child) for child in node):
            return (LEAF if offset in starts else node), len(node)
        children = []
        size = 0
        for child in node:
            collapsed, child_size = _walk(child, offset + size)
            children.append(collapsed)
            size += child_size
        return tuple(children), size

    return _walk(tree, 0)[0]


def opposing_carets(diagram: TreeDiagram) -> List[int]:
    """Leaf positions where top and bottom both carry an all-leaf caret."""
    return sorted(set(_caret_starts(diagram.top)) & set(_caret_starts(diagram.bottom)))


def reduce(diagram: TreeDiagram, chooser: Optional[Callable[[List[int]], int]] = None) -> TreeDiagram:
    """Remove opposing carets until none are left.

    Without ``chooser`` every opposing pair found in a sweep is removed at
    once; with it one pair is removed per sweep.
    """
    top, bottom = diagram.top, diagram.bottom
    while True:
        common = sorted(set(_caret_starts(top)) & set(_caret_starts(bottom)))
        if not common:
            break
        starts = frozenset([chooser(common)]) if chooser else frozenset(common)
        top, bottom = _collapse(top, starts), _collapse(bottom, starts)
    if top is diagram.top and bottom is diagram.bottom:
        return diagram
    return TreeDiagram(diagram.p, top, bottom)


def is_reduced(diagram: TreeDiagram) -> bool:
    return not opposing_carets(diagram)


def inflate(diagram: TreeDiagram, leaf: int) -> TreeDiagram:
    """Hang an opposing caret pair under leaf ``leaf`` of both trees."""
    if not 0 <= leaf < diagram.leaves:
        raise IndexError(f"Leaf {leaf} out of range for a diagram with {diagram.leaves} leaves")
    new = caret(diagram.p)
    subtrees = [new if k == leaf else LEAF for k in range(diagram.leaves)]
    return TreeDiagram(diagram.p, _graft(diagram.top, subtrees), _graft(diagram.bottom, subtrees))


def random_inflation(diagram: TreeDiagram, rounds: int, rng: random.Random) -> TreeDiagram:
    for _ in range(rounds):
        diagram = inflate(diagram, rng.randrange(diagram.leaves))
    return diagram


# Multiplication

def _union(a: Tree, b: Tree) -> Tree:
    """Minimal common refinement of two trees."""
    if is_leaf(a):
        return b
    if is_leaf(b):
        return a
    return tuple(_union(x, y) for x, y in zip(a, b))


def _leaf_subtrees(tree: Tree, refinement: Tree) -> List[Tree]:
    """Subtrees of ``refinement`` hanging under each leaf of ``tree``."""
    if is_leaf(tree):
        return [refinement]
    return [sub for child, finer in zip(tree, refinement) for sub in _leaf_subtrees(child, finer)]


def _graft(tree: Tree, subtrees: Sequence[Tree]) -> Tree:
    """Replace leaf k of ``tree`` with subtrees[k]."""
    remaining = iter(subtrees)

    def _walk(node: Tree) -> Tree:
        if is_leaf(node):
            return next(remaining)
        return tuple(_walk(child) for child in node)

    return _walk(tree)


def multiply(a: TreeDiagram, b: TreeDiagram) -> TreeDiagram:
    """The product a.b, acting as a first and then b."""
    if a.p != b.p:
        raise WrongArity(a.p, b.p)
    refinement = _union(a.bottom, b.top)
    top = _graft(a.top, _leaf_subtrees(a.bottom, refinement))
    bottom = _graft(b.bottom, _leaf_subtrees(b.top, refinement))
    return reduce(TreeDiagram(a.p, top, bottom))


def inverse(diagram: TreeDiagram) -> TreeDiagram:
    return TreeDiagram(diagram.p, diagram.bottom, diagram.top)


def power(diagram: TreeDiagram, exponent: int) -> TreeDiagram:
    base = diagram if exponent >= 0 else inverse(diagram)
    result = identity(diagram.p)
    for _ in range(abs(exponent)):
        result = multiply(result, base)
    return result


# Generators and shifts

def shift_right(diagram: TreeDiagram) -> TreeDiagram:
    """Put the diagram under the last child of a new root caret."""
    pad = (LEAF,) * (diagram.p - 1)
    return reduce(TreeDiagram(diagram.p, pad + (diagram.top,), pad + (diagram.bottom,)))


def shift_left(diagram: TreeDiagram) -> TreeDiagram:
    """Put the diagram under the first child of a new root caret."""
    pad = (LEAF,) * (diagram.p - 1)
    return reduce(TreeDiagram(diagram.p, (diagram.top,) + pad, (diagram.bottom,) + pad))


@lru_cache(maxsize=4096)
def generator_diagram(i: int, p: int) -> TreeDiagram:
    """Reduced diagram of x_i in F_p.

    For j < p - 1 the top tree carries a caret under child j of the root
    and the bottom tree under the last child; x_{j + k(p-1)} is the k-th
    right shift of x_j.
    """
    if i < 0 or p < 2:
        raise ValueError(f"No generator x_{i} in F_{p}")
    j, k = i % (p - 1), i // (p - 1)
    top = tuple(caret(p) if child == j else LEAF for child in range(p))
    bottom = (LEAF,) * (p - 1) + (caret(p),)
    diagram = TreeDiagram(p, top, bottom)
    for _ in range(k):
        diagram = shift_right(diagram)
    return diagram


def letter_diagram(index: int, exponent: int, p: int) -> TreeDiagram:
    generator = generator_diagram(index, p)
    return generator if exponent == 1 else inverse(generator)


def eval_word(word: Word) -> TreeDiagram:
    """Reduced diagram of the product of the letters of ``word``."""
    result = identity(word.p)
    for letter in word:
        result = multiply(result, letter_diagram(letter.index, letter.exponent, word.p))
    return result


# Abelianization

@dataclass(frozen=True)
class AbelianImage:
    """(log2 f'(0), log2 f'(1)) of an element of F."""

    left: int
    right: int

    def __add__(self, other: "AbelianImage") -> "AbelianImage":
        return AbelianImage(self.left + other.left, self.right + other.right)


def abelianization(diagram: TreeDiagram) -> AbelianImage:
    if diagram.p != 2:
        raise WrongArity(2, diagram.p)
    top, bottom = leaf_depths(diagram.top), leaf_depths(diagram.bottom)
    return AbelianImage(top[0] - bottom[0], top[-1] - bottom[-1])


def rect_membership(diagram: TreeDiagram, a: int, b: int) -> bool:
    """Membership in K_(a,b), the preimage of aZ + bZ under abelianization."""
    image = abelianization(diagram)

    def _divides(modulus: int, value: int) -> bool:
        return value == 0 if modulus == 0 else value % modulus == 0

    return _divides(a, image.left) and _divides(b, image.right)


# Embeddings between F_2 and F_3

def iota_word(word: Word) -> Word:
    """y_i -> x_{2i} from F_2 into F_3."""
    if word.p != 2:
        raise WrongArity(2, word.p)
    return Word(tuple(Letter(2 * letter.index, letter.exponent) for letter in word), 3)


def alpha_word(word: Word) -> Word:
    """x_i -> y_i y_{i+1} from F_3 onto the oriented subgroup of F_2."""
    if word.p != 3:
        raise WrongArity(3, word.p)
    letters = []
    for letter in word:
        first, second = Letter(letter.index, 1), Letter(letter.index + 1, 1)
        if letter.is_positive:
            letters.extend([first, second])
        else:
            letters.extend([second.inverse(), first.inverse()])
    return Word(tuple(letters), 2)


def _iota_tree(tree: Tree) -> Tree:
    if is_leaf(tree):
        return tree
    left, right = tree
    return (_iota_tree(left), LEAF, _iota_tree(right))


def _alpha_tree(tree: Tree) -> Tree:
    if is_leaf(tree):
        return tree
    left, middle, right = tree
    return (_alpha_tree(left), (_alpha_tree(middle), _alpha_tree(right)))


def iota_diagram(diagram: TreeDiagram) -> TreeDiagram:
    """Every binary caret gains a middle leaf."""
    if diagram.p != 2:
        raise WrongArity(2, diagram.p)
    return reduce(TreeDiagram(3, _iota_tree(diagram.top), _iota_tree(diagram.bottom)))


def alpha_diagram(diagram: TreeDiagram) -> TreeDiagram:
    """Every ternary caret (a, b, c) becomes (a, (b, c))."""
    if diagram.p != 3:
        raise WrongArity(3, diagram.p)
    return reduce(TreeDiagram(2, _alpha_tree(diagram.top), _alpha_tree(diagram.bottom)))


# Piecewise-linear view

def intervals(diagram: TreeDiagram) -> List[Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction]]]:
    """Domain interval -> range interval for each linear piece."""
    return list(zip(leaf_intervals(diagram.top, diagram.p), leaf_intervals(diagram.bottom, diagram.p)))


def apply(diagram: TreeDiagram, t: Fraction) -> Fraction:
    """Evaluate the homeomorphism of [0, 1] at an exact rational point."""
    t = Fraction(t)
    if not 0 <= t <= 1:
        raise ValueError(f"{t} is outside [0, 1]")
    for (lo, hi), (image_lo, image_hi) in intervals(diagram):
        if lo <= t <= hi:
            return image_lo + (t - lo) * (image_hi - image_lo) / (hi - lo)
    raise AssertionError("leaf intervals do not cover [0, 1]")


def slopes_at_ends(diagram: TreeDiagram) -> Tuple[Fraction, Fraction]:
    pieces = intervals(diagram)
    (lo, hi), (image_lo, image_hi) = pieces[0]
    first = (image_hi - image_lo) / (hi - lo)
    (lo, hi), (image_lo, image_hi) = pieces[-1]
    return first, (image_hi - image_lo) / (hi - lo)
