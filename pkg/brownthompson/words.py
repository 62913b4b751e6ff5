"""Words over the generators of F_p and the rewriting calculus on them.

Three reduction systems act on words of fixed length:

* ``step_f`` moves inverse letters to the right of positive ones,
* ``step_h`` sorts the positive and the negative parts,
* ``step_push`` pushes the letters of minimal index to the two ends.

``normalize`` runs ``step_f`` to a fixpoint and then ``step_h``; every
letter carries the position it started from, so the permutation tau comes
for free. No rule ever cancels letters: lengths are preserved.

``standard_form`` is the cancelling counterpart: one form per group element.
"""

import re
from bisect import bisect_right
from dataclasses import dataclass
from typing import Callable, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Tuple

from .errors import EmptyWord, NotNeutral, ParseError, PreconditionViolated, VerificationFailed
from .utils.logging import get_logger

logger = get_logger(__name__)

# Picks one redex position out of the applicable ones.
Chooser = Callable[[List[int]], int]

_TOKEN = re.compile(r"^([xy])(\d+)(\^-1)?$")


@dataclass(frozen=True)
class Letter:
    """The generator x_index raised to exponent +1 or -1."""

    index: int
    exponent: int = 1

    def __post_init__(self):
        if self.index < 0:
            raise ValueError(f"Letter index must be non-negative, got {self.index}")
        if self.exponent not in (1, -1):
            raise ValueError(f"Letter exponent must be +1 or -1, got {self.exponent}")

    @property
    def is_positive(self) -> bool:
        return self.exponent == 1

    def inverse(self) -> "Letter":
        return Letter(self.index, -self.exponent)

    def shifted(self, offset: int) -> "Letter":
        return Letter(self.index + offset, self.exponent)

    def format(self, symbol: str = "x") -> str:
        return f"{symbol}{self.index}" + ("" if self.is_positive else "^-1")

    def __str__(self) -> str:
        return self.format()


@dataclass(frozen=True)
class Word:
    """Finite sequence of letters in F_p."""

    letters: Tuple[Letter, ...] = ()
    p: int = 2

    def __post_init__(self):
        if self.p < 2:
            raise ValueError(f"p must be at least 2, got {self.p}")
        if not isinstance(self.letters, tuple):
            object.__setattr__(self, "letters", tuple(self.letters))

    @classmethod
    def from_pairs(cls, pairs: Sequence[Tuple[int, int]], p: int = 2) -> "Word":
        """Build a word from (index, exponent) pairs."""
        return cls(tuple(Letter(i, e) for i, e in pairs), p)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __getitem__(self, item):
        return self.letters[item]

    def __add__(self, other: "Word") -> "Word":
        if self.p != other.p:
            raise ValueError(f"Cannot concatenate words over F_{self.p} and F_{other.p}")
        return Word(self.letters + other.letters, self.p)

    def __str__(self) -> str:
        return format_word(self)

    @property
    def exponent_sum(self) -> int:
        return sum(letter.exponent for letter in self.letters)

    @property
    def indices(self) -> Tuple[int, ...]:
        return tuple(letter.index for letter in self.letters)

    @property
    def exponents(self) -> Tuple[int, ...]:
        return tuple(letter.exponent for letter in self.letters)

    def inverse(self) -> "Word":
        """Reverse the word and invert every letter."""
        return Word(tuple(letter.inverse() for letter in reversed(self.letters)), self.p)


def parse_word(text: str, p: int = 2) -> Word:
    """Parse whitespace-separated tokens like ``x0 x2^-1``.

    ``y`` is accepted as the generator symbol when p == 2.
    """
    letters = []
    for position, token in enumerate(text.split()):
        match = _TOKEN.match(token)
        if not match:
            raise ParseError(position, token)
        symbol, digits, inverse = match.groups()
        if symbol == "y" and p != 2:
            raise ParseError(position, token, f"Generator symbol 'y' is only valid for p=2 (got p={p})")
        letters.append(Letter(int(digits), -1 if inverse else 1))
    return Word(tuple(letters), p)


def format_word(word: Word, symbol: str = "x") -> str:
    """Inverse of parse_word."""
    return " ".join(letter.format(symbol) for letter in word.letters)


# Rewriting rules

def step_f(a: Letter, b: Letter, p: int) -> Optional[Tuple[Letter, Letter]]:
    """Move an inverse letter to the right of a positive one."""
    if a.exponent != -1 or b.exponent != 1:
        return None
    if a.index > b.index:
        return Letter(b.index, 1), Letter(a.index + p - 1, -1)
    if a.index < b.index:
        return Letter(b.index + p - 1, 1), Letter(a.index, -1)
    return b, a


def step_h(a: Letter, b: Letter, p: int) -> Optional[Tuple[Letter, Letter]]:
    """Sort two adjacent letters of the same sign."""
    if a.exponent == 1 and b.exponent == 1 and b.index - p + 1 > a.index:
        return Letter(b.index - p + 1, 1), a
    if a.exponent == -1 and b.exponent == -1 and a.index - p + 1 > b.index:
        return b, Letter(a.index - p + 1, -1)
    return None


def step_push(a: Letter, b: Letter, i0: int, p: int) -> Optional[Tuple[Letter, Letter]]:
    """Push x_i0 to the left and x_i0^-1 to the right."""
    if b.index == i0 and b.exponent == 1 and a.index > i0:
        return b, a.shifted(p - 1)
    if a.index == i0 and a.exponent == -1 and b.index > i0:
        return b.shifted(p - 1), a
    if a.index == i0 and b.index == i0 and a.exponent == -1 and b.exponent == 1:
        return b, a
    return None


def _rewrite_to_fixpoint(
    cells: List[Letter],
    tags: List[int],
    rule: Callable[[Letter, Letter], Optional[Tuple[Letter, Letter]]],
    chooser: Optional[Chooser],
    limit: int
) -> int:
    """Apply an adjacent-pair rule until no redex is left; return step count.

    Every rule here exchanges the two letters, so tags are swapped along.
    """
    steps = 0
    start = 0
    while True:
        if chooser is None:
            k = None
            for position in range(start, len(cells) - 1):
                if rule(cells[position], cells[position + 1]) is not None:
                    k = position
                    break
        else:
            redexes = [i for i in range(len(cells) - 1) if rule(cells[i], cells[i + 1]) is not None]
            k = chooser(redexes) if redexes else None
        if k is None:
            return steps

        cells[k], cells[k + 1] = rule(cells[k], cells[k + 1])
        tags[k], tags[k + 1] = tags[k + 1], tags[k]
        steps += 1
        if steps > limit:
            raise VerificationFailed(f"Rewriting exceeded {limit} steps")
        # Leftmost strategy: nothing left of k-1 can have become a redex
        start = max(k - 1, 0)


@dataclass(frozen=True)
class NormalizationTrace:
    """Normal form of a word plus the permutation its letters went through."""

    normal: Word
    tau: Tuple[int, ...]
    steps: int

    @property
    def tau_inverse(self) -> Tuple[int, ...]:
        inverse = [0] * len(self.tau)
        for position, slot in enumerate(self.tau, start=1):
            inverse[slot - 1] = position
        return tuple(inverse)

    @property
    def positive_count(self) -> int:
        return sum(1 for letter in self.normal if letter.is_positive)


def normalize(word: Word, chooser: Optional[Chooser] = None) -> NormalizationTrace:
    """Rewrite ``word`` to the unique normal form of the composite system.

    ``chooser`` selects among applicable redexes; the default is the
    leftmost one. The result does not depend on it.
    """
    p = word.p
    d = len(word)
    cells = list(word.letters)
    tags = list(range(d))
    limit = 8 * d * d + 8

    steps = _rewrite_to_fixpoint(cells, tags, lambda a, b: step_f(a, b, p), chooser, limit)
    steps += _rewrite_to_fixpoint(cells, tags, lambda a, b: step_h(a, b, p), chooser, limit)

    tau = [0] * d
    for slot, original in enumerate(tags):
        tau[original] = slot + 1
    return NormalizationTrace(Word(tuple(cells), p), tuple(tau), steps)


def is_palindromic(normal: Word) -> bool:
    """True for x_j1 ... x_jk x_jk^-1 ... x_j1^-1."""
    d = len(normal)
    if d % 2:
        return False
    half = d // 2
    for l in range(half):
        left, right = normal[l], normal[d - 1 - l]
        if not left.is_positive or right.is_positive or left.index != right.index:
            return False
    return True


def is_neutral(word: Word) -> bool:
    """Decide eval(word) == e through the palindromic normal form."""
    if len(word) % 2 or word.exponent_sum != 0:
        return False
    return is_palindromic(normalize(word).normal)


# Standard forms

@dataclass(frozen=True)
class StandardForm:
    """x_a1 ... x_as x_bt^-1 ... x_b1^-1 with a and b nondecreasing.

    Whenever an index occurs in both parts, one of the next p - 1 indices
    occurs as well. Two words give the same form iff they are equal in F_p.
    """

    p: int
    positives: Tuple[int, ...] = ()
    negatives: Tuple[int, ...] = ()

    @property
    def is_identity(self) -> bool:
        return not self.positives and not self.negatives

    def inverse(self) -> "StandardForm":
        return StandardForm(self.p, self.negatives, self.positives)

    def to_word(self) -> Word:
        letters = [Letter(i, 1) for i in self.positives] + [Letter(i, -1) for i in reversed(self.negatives)]
        return Word(tuple(letters), self.p)

    def __str__(self) -> str:
        return format_word(self.to_word())


def _cancel_pairs(positives: List[int], negatives: List[int], p: int) -> Tuple[List[int], List[int]]:
    """Remove x_i ... x_i^-1 pairs with none of x_{i+1}..x_{i+p-1} in between."""
    while True:
        present = set(positives) | set(negatives)
        target = next(
            (
                i for i in sorted(set(positives) & set(negatives), reverse=True)
                if not any(i + k in present for k in range(1, p))
            ),
            None
        )
        if target is None:
            return positives, negatives
        positives.remove(target)
        negatives.remove(target)
        positives = [i - (p - 1) if i > target else i for i in positives]
        negatives = [i - (p - 1) if i > target else i for i in negatives]


def standard_form(word: Word) -> StandardForm:
    """The unique reduced form of the element ``word`` evaluates to.

    Letters are multiplied in from the right. Unlike ``normalize`` this
    cancels letters, so the result only depends on the group element.
    """
    p = word.p
    shift = p - 1
    positives: List[int] = []
    negatives: List[int] = []
    for letter in word:
        m = letter.index
        if not letter.is_positive:
            k = 0
            while k < len(negatives) and negatives[k] < m:
                m += shift
                k += 1
            negatives.insert(k, m)
            continue

        # x_m crosses the negative part from its right end, smallest index first
        cancelled = False
        for k, j in enumerate(negatives):
            if j < m:
                m += shift
            elif j == m:
                del negatives[k]
                cancelled = True
                break
            else:
                negatives[k:] = [i + shift for i in negatives[k:]]
                break
        if cancelled:
            continue
        k = bisect_right(positives, m)
        positives[k:] = [i + shift for i in positives[k:]]
        positives.insert(k, m)

    positives, negatives = _cancel_pairs(positives, negatives, p)
    return StandardForm(p, tuple(positives), tuple(negatives))


def index_drift(word: Word, trace: NormalizationTrace) -> List[int]:
    """j(l) - i(tau^-1(l)) for every slot l of the normal form."""
    tau_inv = trace.tau_inverse
    return [trace.normal[l].index - word[tau_inv[l] - 1].index for l in range(len(word))]


# Pair partitions

@dataclass(frozen=True)
class PairPartition:
    """Partition of {1..d} into 2-element blocks."""

    pairs: FrozenSet[FrozenSet[int]]

    def __post_init__(self):
        if not isinstance(self.pairs, frozenset):
            object.__setattr__(self, "pairs", frozenset(frozenset(pair) for pair in self.pairs))
        covered = [element for pair in self.pairs for element in pair]
        if any(len(pair) != 2 for pair in self.pairs):
            raise ValueError("Every block of a pair partition has two elements")
        if len(covered) != len(set(covered)) or set(covered) != set(range(1, len(covered) + 1)):
            raise ValueError(f"Blocks {self.sorted_pairs()} do not partition 1..{len(covered)}")

    @classmethod
    def of(cls, *pairs: Tuple[int, int]) -> "PairPartition":
        return cls(frozenset(frozenset(pair) for pair in pairs))

    @classmethod
    def rainbow(cls, d: int) -> "PairPartition":
        """The nested pairing {1,d}, {2,d-1}, ..."""
        if d % 2:
            raise ValueError("Rainbow partitions need even d")
        return cls.of(*[(k, d - k + 1) for k in range(1, d // 2 + 1)])

    @classmethod
    def all(cls, d: int) -> Iterator["PairPartition"]:
        """Every pair partition of {1..d}; (d-1)!! of them."""
        def _pairings(elements: Tuple[int, ...]) -> Iterator[List[Tuple[int, int]]]:
            if not elements:
                yield []
                return
            first, rest = elements[0], elements[1:]
            for k, partner in enumerate(rest):
                for tail in _pairings(rest[:k] + rest[k + 1:]):
                    yield [(first, partner)] + tail

        if d % 2:
            return
        for pairing in _pairings(tuple(range(1, d + 1))):
            yield cls.of(*pairing)

    @property
    def d(self) -> int:
        return 2 * len(self.pairs)

    def partner(self, position: int) -> int:
        for pair in self.pairs:
            if position in pair:
                (other,) = pair - {position}
                return other
        raise KeyError(position)

    def image(self, permutation: Sequence[int]) -> "PairPartition":
        """tau(pi) for tau given 1-indexed as permutation[l-1] = tau(l)."""
        return PairPartition(frozenset(
            frozenset(permutation[element - 1] for element in pair) for pair in self.pairs
        ))

    def sorted_pairs(self) -> List[Tuple[int, int]]:
        return sorted(tuple(sorted(pair)) for pair in self.pairs)

    def __str__(self) -> str:
        return "{" + ", ".join("{%d,%d}" % pair for pair in self.sorted_pairs()) + "}"


def pair_partition(word: Word, trace: Optional[NormalizationTrace] = None) -> PairPartition:
    """Original positions of the letters that cancel in the palindromic normal form."""
    trace = trace or normalize(word)
    if not is_palindromic(trace.normal):
        raise NotNeutral(f"Word {format_word(word)} does not evaluate to the identity")
    d = len(word)
    tau_inv = trace.tau_inverse
    return PairPartition(frozenset(
        frozenset((tau_inv[k], tau_inv[d - k - 1])) for k in range(d // 2)
    ))


# Pushing the minimal index outwards

@dataclass(frozen=True)
class MinIndexPeel:
    """w rewritten as x_i0^r . core . x_i0^-r'."""

    r: int
    r_prime: int
    i0: int
    core: Word
    # Original 1-indexed positions of the core letters
    core_positions: Tuple[int, ...]


def push_shifts(exponents: Sequence[int], at_minimum: Sequence[bool]) -> List[int]:
    """Number of crossings each non-minimal letter undergoes while pushing.

    A letter is crossed by every x_i0 on its right and every x_i0^-1 on its
    left; each crossing raises its index by p - 1.
    """
    d = len(exponents)
    positives_right = [0] * (d + 1)
    for k in range(d - 1, -1, -1):
        positives_right[k] = positives_right[k + 1] + (1 if at_minimum[k] and exponents[k] == 1 else 0)
    crossings = []
    negatives_left = 0
    for k in range(d):
        if at_minimum[k]:
            if exponents[k] == -1:
                negatives_left += 1
            crossings.append(0)
        else:
            crossings.append(positives_right[k + 1] + negatives_left)
    return crossings


def peel_min_index(word: Word) -> MinIndexPeel:
    """Normal form of the push system on ``word``."""
    if not len(word):
        raise EmptyWord("peel_min_index needs a nonempty word")
    p = word.p
    i0 = min(word.indices)
    cells = list(word.letters)
    tags = list(range(1, len(word) + 1))
    _rewrite_to_fixpoint(cells, tags, lambda a, b: step_push(a, b, i0, p), None, 8 * len(word) ** 2 + 8)

    r = 0
    while r < len(cells) and cells[r].index == i0 and cells[r].is_positive:
        r += 1
    r_prime = 0
    while r_prime < len(cells) - r and cells[-1 - r_prime].index == i0 and not cells[-1 - r_prime].is_positive:
        r_prime += 1
    core = cells[r:len(cells) - r_prime]
    if any(letter.index == i0 for letter in core):
        raise VerificationFailed(f"Push system left x_{i0} inside the core of {format_word(word)}")
    return MinIndexPeel(r, r_prime, i0, Word(tuple(core), p), tuple(tags[r:len(cells) - r_prime]))


# Skeletons of neutral words

@dataclass(frozen=True)
class WordSkeleton:
    """A neutral word with only its positive indices known."""

    p: int
    exponents: Tuple[int, ...]
    known: Mapping[int, int]
    partition: PairPartition

    def __post_init__(self):
        d = len(self.exponents)
        if d % 2:
            raise PreconditionViolated("Skeletons have even length")
        if self.partition.d != d:
            raise PreconditionViolated(f"Partition of {self.partition.d} points for a word of length {d}")
        for pair in self.partition.pairs:
            signs = sorted(self.exponents[position - 1] for position in pair)
            if signs != [-1, 1]:
                raise PreconditionViolated(f"Pair {sorted(pair)} does not join a positive and a negative letter")
        positives = {l for l in range(1, d + 1) if self.exponents[l - 1] == 1}
        if set(self.known) != positives:
            raise PreconditionViolated("Known indices must be given exactly at the positive positions")
        if any(index < 0 for index in self.known.values()):
            raise PreconditionViolated("Known indices must be non-negative")

    @property
    def d(self) -> int:
        return len(self.exponents)

    @classmethod
    def from_word(cls, word: Word) -> "WordSkeleton":
        """Forget the negative indices of a neutral word."""
        partition = pair_partition(word)
        known = {l: letter.index for l, letter in enumerate(word, start=1) if letter.is_positive}
        return cls(word.p, word.exponents, known, partition)
