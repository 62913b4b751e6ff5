"""Enumeration engines over words in the first n generators.

Three engines count the same things:

* brute: depth-first search over every word,
* dp: a Counter of group elements folded letter by letter,
* mitm: standard forms of the half-words joined on inverses.

Work is sharded by first letter; shard results are summed or merged, so the
answer does not depend on the worker count.
"""

import time
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from itertools import product
from typing import Callable, Dict, Iterator, List, Optional, Tuple

from .config import config
from .diagrams import TreeDiagram, identity, letter_diagram, multiply
from .errors import BudgetExceeded
from .oriented import theta_diagram
from .utils.logging import get_logger
from .words import Letter, StandardForm, Word, is_neutral, standard_form

logger = get_logger(__name__)


def alphabet(n: int) -> List[Letter]:
    """x_0, x_0^-1, ..., x_{n-1}, x_{n-1}^-1."""
    return [Letter(i, e) for i in range(n) for e in (1, -1)]


def _resolve_workers(workers: Optional[int]) -> int:
    return workers or config.enumeration.workers


def _check_budget(requested: int, budget: int, what: str = "words"):
    if requested > budget:
        logger.warning(f"Refusing to enumerate {requested} {what} (budget {budget})")
        raise BudgetExceeded(requested, budget, what)


def _run_shards(function: Callable, shards: List[tuple], workers: int) -> list:
    if workers <= 1 or len(shards) <= 1:
        return [function(shard) for shard in shards]
    with ProcessPoolExecutor(max_workers=min(workers, len(shards))) as executor:
        return list(executor.map(function, shards))


# Brute force

def _neutral_dfs(prefix: List[Letter], exponent_sum: int, d: int, letters: List[Letter], p: int) -> Iterator[Word]:
    remaining = d - len(prefix)
    if abs(exponent_sum) > remaining:
        return
    if remaining == 0:
        word = Word(tuple(prefix), p)
        if is_neutral(word):
            yield word
        return
    for letter in letters:
        prefix.append(letter)
        yield from _neutral_dfs(prefix, exponent_sum + letter.exponent, d, letters, p)
        prefix.pop()


def _count_neutral_shard(shard: Tuple[int, int, int, int]) -> int:
    d, n, p, first = shard
    letters = alphabet(n)
    start = letters[first]
    return sum(1 for _ in _neutral_dfs([start], start.exponent, d, letters, p))


def count_neutral_brute(
    d: int,
    n: int,
    p: int,
    budget: Optional[int] = None,
    workers: Optional[int] = None
) -> int:
    """|W_0(d, n)| by testing every word with the rewriting criterion."""
    if d % 2:
        return 0
    if d == 0:
        return 1
    _check_budget((2 * n) ** d, budget or config.enumeration.brute_budget)

    started = time.perf_counter()
    shards = [(d, n, p, first) for first in range(2 * n)]
    count = sum(_run_shards(_count_neutral_shard, shards, _resolve_workers(workers)))
    logger.info(f"brute d={d} n={n} p={p}: {count} neutral words in {time.perf_counter() - started:.2f}s")
    return count


def _oriented_dfs(product: TreeDiagram, depth: int, d: int, steps: List[TreeDiagram], cache: Dict[TreeDiagram, int]) -> int:
    if depth == d:
        if product not in cache:
            cache[product] = theta_diagram(product)
        return cache[product]
    return sum(_oriented_dfs(multiply(product, step), depth + 1, d, steps, cache) for step in steps)


def _count_oriented_shard(shard: Tuple[int, int, int]) -> int:
    d, n, first = shard
    steps = [letter_diagram(letter.index, letter.exponent, 2) for letter in alphabet(n)]
    return _oriented_dfs(steps[first], 1, d, steps, {})


def count_oriented_brute(d: int, n: int, budget: Optional[int] = None, workers: Optional[int] = None) -> int:
    """Words of length d over y_0..y_{n-1} whose product has theta = 1."""
    if d == 0:
        return 1
    _check_budget((2 * n) ** d, budget or config.enumeration.brute_budget)

    started = time.perf_counter()
    shards = [(d, n, first) for first in range(2 * n)]
    count = sum(_run_shards(_count_oriented_shard, shards, _resolve_workers(workers)))
    logger.info(f"brute theta d={d} n={n}: {count} words in {time.perf_counter() - started:.2f}s")
    return count


# Element DP

def _distribution_shard(shard: Tuple[int, int, int, int, int]) -> Counter:
    length, n, p, first, budget = shard
    steps = [letter_diagram(letter.index, letter.exponent, p) for letter in alphabet(n)]
    current = Counter({steps[first]: 1})
    for _ in range(length - 1):
        following = Counter()
        for element, count in current.items():
            for step in steps:
                following[multiply(element, step)] += count
        _check_budget(len(following), budget, "elements")
        current = following
    return current


def element_distribution(
    length: int,
    n: int,
    p: int,
    budget: Optional[int] = None,
    workers: Optional[int] = None
) -> Counter:
    """Number of words of the given length evaluating to each element."""
    budget = budget or config.enumeration.dp_budget
    if length == 0:
        return Counter({identity(p): 1})
    shards = [(length, n, p, first, budget) for first in range(2 * n)]
    merged = Counter()
    for part in _run_shards(_distribution_shard, shards, _resolve_workers(workers)):
        merged.update(part)
    _check_budget(len(merged), budget, "elements")
    return merged


def count_oriented_dp(d: int, n: int, budget: Optional[int] = None, workers: Optional[int] = None) -> int:
    started = time.perf_counter()
    distribution = element_distribution(d, n, 2, budget, workers)
    count = sum(c for element, c in distribution.items() if theta_diagram(element))
    logger.info(
        f"dp theta d={d} n={n}: {count} words over {len(distribution)} elements "
        f"in {time.perf_counter() - started:.2f}s"
    )
    return count


def count_neutral_dp(d: int, n: int, p: int, budget: Optional[int] = None, workers: Optional[int] = None) -> int:
    if d % 2:
        return 0
    return element_distribution(d, n, p, budget, workers)[identity(p)]


# Meet in the middle

def _half_forms_shard(shard: Tuple[int, int, int, int]) -> Counter:
    length, n, p, first = shard
    letters = alphabet(n)
    head = (letters[first],)
    return Counter(standard_form(Word(head + rest, p)) for rest in product(letters, repeat=length - 1))


def half_distribution(length: int, n: int, p: int, workers: Optional[int] = None) -> Counter:
    """Number of words of the given length per standard form."""
    if length == 0:
        return Counter({StandardForm(p): 1})
    shards = [(length, n, p, first) for first in range(2 * n)]
    merged = Counter()
    for part in _run_shards(_half_forms_shard, shards, _resolve_workers(workers)):
        merged.update(part)
    return merged


def count_neutral_mitm(
    d: int,
    n: int,
    p: int,
    budget: Optional[int] = None,
    workers: Optional[int] = None
) -> int:
    """Sum over g of L(g) * L(g^-1) for the half-word distribution L."""
    if d % 2:
        return 0
    half = d // 2
    _check_budget((2 * n) ** half, budget or config.enumeration.mitm_budget, "half-words")

    started = time.perf_counter()
    left = half_distribution(half, n, p, workers)
    count = sum(c * left.get(form.inverse(), 0) for form, c in left.items())
    logger.info(
        f"mitm d={d} n={n} p={p}: {count} neutral words, {len(left)} half-elements "
        f"in {time.perf_counter() - started:.2f}s"
    )
    return count


def _half_words(length: int, n: int, p: int) -> Dict[StandardForm, List[Tuple[Letter, ...]]]:
    halves: Dict[StandardForm, List[Tuple[Letter, ...]]] = defaultdict(list)
    for letters in product(alphabet(n), repeat=length):
        halves[standard_form(Word(letters, p))].append(letters)
    return halves


def neutral_words(
    d: int,
    n: int,
    p: int,
    engine: str = "brute",
    budget: Optional[int] = None
) -> Iterator[Word]:
    """Every neutral word of length d over x_0..x_{n-1}.

    The brute engine yields in lexicographic alphabet order; mitm yields
    grouped by the element of the first half.
    """
    if d % 2:
        return
    if engine == "brute":
        _check_budget((2 * n) ** d, budget or config.enumeration.brute_budget)
        yield from _neutral_dfs([], 0, d, alphabet(n), p)
        return
    if engine != "mitm":
        raise ValueError(f"Unknown engine {engine!r}")

    _check_budget((2 * n) ** (d // 2), budget or config.enumeration.mitm_budget, "half-words")
    halves = _half_words(d // 2, n, p)
    for form, heads in halves.items():
        for tail in halves.get(form.inverse(), []):
            for head in heads:
                yield Word(head + tail, p)
