"""Reconstructing neutral words from partial information.

``complete_from_positives`` fills in the negative indices of a skeleton by
peeling the minimal index off recursively. ``complete_from_tau`` rebuilds a
word from its permutation and the indices of its positive letters by
running the rewriting on symbolic letters.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .errors import PreconditionViolated, VerificationFailed
from .utils.logging import get_logger
from .words import Letter, Word, WordSkeleton, format_word, is_palindromic, normalize, pair_partition, push_shifts

logger = get_logger(__name__)


@dataclass(frozen=True)
class Completion:
    """Outcome of complete_from_positives; ``word`` is None when no completion exists."""

    word: Optional[Word] = None
    reason: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.word is not None


class _NoCompletion(Exception):
    pass


@dataclass(frozen=True)
class _Slot:
    exponent: int
    index: Optional[int]
    pair: int


def _resolve(slots: List[_Slot], p: int, depth: int = 0) -> List[int]:
    """Indices for every slot of a partial neutral word."""
    if not slots:
        return []

    i0 = min(slot.index for slot in slots if slot.index is not None)
    minimal_pairs = {slot.pair for slot in slots if slot.index == i0}
    at_minimum = [slot.pair in minimal_pairs for slot in slots]
    crossings = push_shifts([slot.exponent for slot in slots], at_minimum)

    core = [
        _Slot(slot.exponent, None if slot.index is None else slot.index + (p - 1) * shift, slot.pair)
        for slot, shift, minimal in zip(slots, crossings, at_minimum)
        if not minimal
    ]
    logger.debug(f"Peeled index {i0} at depth {depth}, core of length {len(core)}")
    core_values = iter(_resolve(core, p, depth + 1))

    values = []
    for position, (slot, shift, minimal) in enumerate(zip(slots, crossings, at_minimum), start=1):
        if minimal:
            values.append(i0)
            continue
        value = next(core_values) - (p - 1) * shift
        if value <= i0:
            raise _NoCompletion(
                f"Letter {position} at depth {depth} is forced to index {value}, "
                f"which is not above the minimal index {i0}"
            )
        values.append(value)
    return values


def complete_from_positives(skeleton: WordSkeleton) -> Completion:
    """The unique neutral word matching a skeleton, if there is one."""
    pair_ids = {}
    for pair_id, pair in enumerate(skeleton.partition.sorted_pairs()):
        for position in pair:
            pair_ids[position] = pair_id

    slots = [
        _Slot(exponent, skeleton.known.get(position), pair_ids[position])
        for position, exponent in enumerate(skeleton.exponents, start=1)
    ]
    try:
        values = _resolve(slots, skeleton.p)
    except _NoCompletion as e:
        return Completion(None, str(e))

    word = Word(tuple(Letter(v, e) for v, e in zip(values, skeleton.exponents)), skeleton.p)
    trace = normalize(word)
    if not is_palindromic(trace.normal):
        return Completion(None, f"Candidate {format_word(word)} is not neutral")
    if pair_partition(word, trace) != skeleton.partition:
        return Completion(None, f"Candidate {format_word(word)} has pair partition {pair_partition(word, trace)}")
    return Completion(word)


# Symbolic normalization

@dataclass(frozen=True)
class _Token:
    """A letter known only through its pair and accumulated index shift.

    Lower pair numbers stand for larger indices; the gap condition keeps
    every comparison decided by pair number alone.
    """

    pair: int
    exponent: int
    offset: int = 0

    def bumped(self, amount: int) -> "_Token":
        return _Token(self.pair, self.exponent, self.offset + amount)


def _symbolic_f(a: _Token, b: _Token, p: int) -> Optional[Tuple[_Token, _Token]]:
    if a.exponent != -1 or b.exponent != 1:
        return None
    if a.pair < b.pair:
        return b, a.bumped(p - 1)
    if a.pair > b.pair:
        return b.bumped(p - 1), a
    return b, a


def _symbolic_h(a: _Token, b: _Token, p: int) -> Optional[Tuple[_Token, _Token]]:
    if a.exponent == 1 and b.exponent == 1 and a.pair > b.pair:
        return b.bumped(1 - p), a
    if a.exponent == -1 and b.exponent == -1 and a.pair < b.pair:
        return b, a.bumped(1 - p)
    return None


def _run_symbolic(tokens: List[_Token], rule, p: int) -> None:
    k = 0
    while k < len(tokens) - 1:
        rewritten = rule(tokens[k], tokens[k + 1], p)
        if rewritten is None:
            k += 1
            continue
        tokens[k], tokens[k + 1] = rewritten
        k = max(k - 1, 0)


def gap_condition_holds(half: Sequence[int], p: int, d: int) -> bool:
    """Consecutive positive indices drop by more than (4p-4)d."""
    return all(half[l] < half[l - 1] - (4 * p - 4) * d for l in range(1, len(half)))


def complete_from_tau(
    tau: Sequence[int],
    exponents: Sequence[int],
    half: Sequence[int],
    p: int,
    check_gap: bool = True
) -> Word:
    """The unique neutral word with permutation ``tau``.

    ``tau`` and ``exponents`` are indexed by original position (1-indexed
    values for tau); ``half[l-1]`` is the index of the letter tau sends to
    slot l, for l up to d/2.
    """
    d = len(tau)
    if d % 2 or sorted(tau) != list(range(1, d + 1)):
        raise PreconditionViolated(f"{list(tau)} is not a permutation of 1..{d} with d even")
    if len(exponents) != d or len(half) != d // 2:
        raise PreconditionViolated("exponents must have length d and half length d/2")

    tau_inv = [0] * d
    for position, slot in enumerate(tau, start=1):
        tau_inv[slot - 1] = position
    for slot, position in enumerate(tau_inv, start=1):
        expected = 1 if slot <= d // 2 else -1
        if exponents[position - 1] != expected:
            raise PreconditionViolated(f"Letter {position} lands in slot {slot} but has exponent {exponents[position - 1]}")
    if check_gap and not gap_condition_holds(half, p, d):
        raise PreconditionViolated(f"Indices {list(half)} violate the gap condition for p={p}, d={d}")

    # Pair k: positive at tau^-1(k), negative at tau^-1(d-k+1)
    tokens: List[Optional[_Token]] = [None] * d
    for k in range(1, d // 2 + 1):
        tokens[tau_inv[k - 1] - 1] = _Token(k, 1)
        tokens[tau_inv[d - k] - 1] = _Token(k, -1)

    _run_symbolic(tokens, _symbolic_f, p)
    _run_symbolic(tokens, _symbolic_h, p)

    positive_offset = {token.pair: token.offset for token in tokens if token.exponent == 1}
    negative_offset = {token.pair: token.offset for token in tokens if token.exponent == -1}

    indices = [0] * d
    for k in range(1, d // 2 + 1):
        unknown = half[k - 1] + positive_offset[k] - negative_offset[k]
        if unknown < 0:
            raise PreconditionViolated(f"Pair {k} forces a negative index {unknown}")
        indices[tau_inv[k - 1] - 1] = half[k - 1]
        indices[tau_inv[d - k] - 1] = unknown

    word = Word(tuple(Letter(i, e) for i, e in zip(indices, exponents)), p)
    trace = normalize(word)
    if not is_palindromic(trace.normal) or trace.tau != tuple(tau):
        logger.error(f"Symbolic completion {format_word(word)} re-normalizes to tau={list(trace.tau)}")
        raise VerificationFailed(f"Completion {format_word(word)} does not realize tau={list(tau)}")
    return word
