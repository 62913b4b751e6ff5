"""Invariant suites run by ``cli.py verify``."""

import random
import time
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, Iterator, List, Optional, Tuple

from .completion import complete_from_positives, complete_from_tau
from .config import config
from .diagrams import (
    abelianization,
    alpha_diagram,
    alpha_word,
    apply,
    eval_word,
    generator_diagram,
    identity,
    inverse,
    iota_diagram,
    iota_word,
    multiply,
    random_inflation,
    rect_membership,
    reduce,
    shift_left,
    shift_right,
    slopes_at_ends,
)
from .enumeration import alphabet, count_neutral_brute, count_neutral_mitm, neutral_words
from .errors import BrownThompsonError
from .moments import (
    bound_report,
    double_factorial,
    rainbow_count,
    second_theta_moment,
    tau_histogram,
    theta_moment_unnormalized,
)
from .oriented import chromatic_at_two, parity_membership, planar_graph, theta, theta_diagram
from .schemas import CheckResult, Engine, SuiteReport
from .utils.logging import get_logger
from .words import (
    Letter,
    Word,
    WordSkeleton,
    format_word,
    index_drift,
    is_neutral,
    normalize,
    pair_partition,
    standard_form,
)

logger = get_logger(__name__)

CheckOutcome = Tuple[int, List[str]]

MAX_REPORTED_FAILURES = 10


def random_word(rng: random.Random, d: int, p: int, max_index: int) -> Word:
    return Word(tuple(Letter(rng.randrange(max_index), rng.choice((1, -1))) for _ in range(d)), p)


def all_words(max_length: int, n: int, p: int, min_length: int = 0) -> Iterator[Word]:
    """Every word of length min_length..max_length over x_0..x_{n-1}."""
    letters = alphabet(n)
    for d in range(min_length, max_length + 1):
        for letters_tuple in product(letters, repeat=d):
            yield Word(letters_tuple, p)


def drift_report(word: Word) -> List[str]:
    """Index drift bounds for one normalization."""
    trace = normalize(word)
    d, p = len(word), word.p
    bound = d * (p - 1) if word.exponent_sum else d * (p - 1) // 2
    return [
        f"{format_word(word)}: slot {l + 1} drifted by {drift} (bound {bound})"
        for l, drift in enumerate(index_drift(word, trace))
        if abs(drift) > bound
    ]


class InvariantChecker:
    """Runs named invariant suites and collects CheckResults."""

    def __init__(self, seed: Optional[int] = None, max_length: Optional[int] = None):
        self.seed = config.verify.seed if seed is None else seed
        self.max_length = max_length or config.verify.oracle_max_length
        self.suites: Dict[str, List[Tuple[str, Callable[[], CheckOutcome]]]] = {
            "rewrite": [
                ("confluence", self.check_confluence),
                ("termination_and_drift", self.check_termination_and_drift),
                ("neutrality_oracle", self.check_neutrality_oracle),
                ("minimal_index_pairs", self.check_minimal_index_pairs),
                ("completion_round_trip", self.check_completion_round_trip),
                ("completion_from_tau", self.check_completion_from_tau),
            ],
            "trees": [
                ("defining_relations", self.check_defining_relations),
                ("group_laws", self.check_group_laws),
                ("abelianization", self.check_abelianization),
                ("shifts", self.check_shifts),
                ("embeddings", self.check_embeddings),
                ("reduction_order", self.check_reduction_order),
                ("piecewise_linear", self.check_piecewise_linear),
            ],
            "oriented": [
                ("parity_oracle", self.check_parity_oracle),
                ("length_two", self.check_length_two),
                ("graph_shape", self.check_graph_shape),
                ("representatives_and_shifts", self.check_representatives_and_shifts),
            ],
            "moments": [
                ("second_moment", self.check_second_moment),
                ("engine_equivalence", self.check_engine_equivalence),
                ("odd_moments", self.check_odd_moments),
                ("rainbow", self.check_rainbow),
                ("counting_bounds", self.check_counting_bounds),
            ],
        }

    def _rng(self, name: str) -> random.Random:
        return random.Random(f"{self.seed}:{name}")

    def run(self, suite: str) -> List[SuiteReport]:
        """Run one suite, or every suite for ``all``."""
        names = list(self.suites) if suite == "all" else [suite]
        unknown = [name for name in names if name not in self.suites]
        if unknown:
            raise ValueError(f"Unknown suite {unknown[0]!r}")
        return [self.run_suite(name) for name in names]

    def run_suite(self, name: str) -> SuiteReport:
        report = SuiteReport(suite=name)
        for check_name, check in self.suites[name]:
            started = time.perf_counter()
            try:
                checked, failures = check()
            except BrownThompsonError as e:
                checked, failures = 0, [f"{type(e).__name__}: {e}"]
            result = CheckResult(
                name=check_name,
                passed=not failures,
                checked=checked,
                failures=failures[:MAX_REPORTED_FAILURES],
                elapsed_seconds=round(time.perf_counter() - started, 3)
            )
            if failures:
                logger.error(f"{name}.{check_name}: {len(failures)} violations, first: {failures[0]}")
            else:
                logger.info(f"{name}.{check_name}: {checked} cases passed")
            report.results.append(result)
        return report

    # Rewriting

    def check_confluence(self) -> CheckOutcome:
        rng = self._rng("confluence")
        failures = []
        samples = config.verify.confluence_samples
        for _ in range(samples):
            word = random_word(rng, rng.randint(0, 8), rng.choice((2, 3, 5)), 10)
            expected = normalize(word).normal
            for _ in range(config.verify.strategies):
                normal = normalize(word, chooser=rng.choice).normal
                if normal != expected:
                    failures.append(f"{format_word(word)}: {format_word(normal)} != {format_word(expected)}")
        return samples, failures

    def check_termination_and_drift(self) -> CheckOutcome:
        rng = self._rng("termination")
        failures = []
        samples = config.verify.confluence_samples
        for _ in range(samples):
            word = random_word(rng, rng.randint(0, 8), rng.choice((2, 3, 5)), 10)
            steps = normalize(word).steps
            if steps > len(word) ** 2:
                failures.append(f"{format_word(word)}: {steps} steps")
            failures.extend(drift_report(word))
        return samples, failures

    def check_neutrality_oracle(self) -> CheckOutcome:
        failures = []
        checked = 0
        for p in (2, 3):
            for word in all_words(self.max_length, 3, p):
                checked += 1
                trace = normalize(word)
                diagram = eval_word(word)
                if is_neutral(word) != (diagram == identity(p)):
                    failures.append(f"p={p} {format_word(word)}: neutrality disagrees with diagram")
                if standard_form(word).is_identity != (diagram == identity(p)):
                    failures.append(f"p={p} {format_word(word)}: standard form disagrees with diagram")
                if eval_word(trace.normal) != diagram:
                    failures.append(f"p={p} {format_word(word)}: normal form evaluates differently")
        return checked, failures

    def _neutral_sample(self) -> Iterator[Word]:
        for p in (2, 3):
            for d in range(2, min(self.max_length, 6) + 1, 2):
                yield from neutral_words(d, 3, p)

    def check_minimal_index_pairs(self) -> CheckOutcome:
        failures = []
        checked = 0
        for word in self._neutral_sample():
            checked += 1
            i0 = min(word.indices)
            trace = normalize(word)
            for pair in pair_partition(word, trace).pairs:
                at_minimum = [word[position - 1].index == i0 for position in pair]
                if any(at_minimum) and not all(at_minimum):
                    failures.append(f"{format_word(word)}: pair {sorted(pair)} splits the minimal index")
            d, p = len(word), word.p
            tau_inv = trace.tau_inverse
            for k in range(d // 2):
                gap = abs(word[tau_inv[k] - 1].index - word[tau_inv[d - k - 1] - 1].index)
                if gap > d * (p - 1):
                    failures.append(f"{format_word(word)}: mirror slots {k + 1} differ by {gap}")
        return checked, failures

    def check_completion_round_trip(self) -> CheckOutcome:
        failures = []
        checked = 0
        for word in self._neutral_sample():
            checked += 1
            completion = complete_from_positives(WordSkeleton.from_word(word))
            if completion.word != word:
                failures.append(f"{format_word(word)}: completed to {completion.word} ({completion.reason})")
        return checked, failures

    def check_completion_from_tau(self) -> CheckOutcome:
        rng = self._rng("completion")
        failures = []
        checked = 0
        for d in (2, 4):
            for p in (2, 3, 5):
                for _ in range(config.verify.completion_samples):
                    checked += 1
                    tau, exponents, half = random_tau_instance(rng, d, p)
                    try:
                        complete_from_tau(tau, exponents, half, p)
                    except BrownThompsonError as e:
                        failures.append(f"d={d} p={p} tau={tau} half={half}: {e}")
        return checked, failures

    # Tree diagrams

    def check_defining_relations(self) -> CheckOutcome:
        failures = []
        checked = 0
        for p in (2, 3, 4):
            for n in range(7):
                for k in range(n):
                    checked += 1
                    left = multiply(generator_diagram(n, p), generator_diagram(k, p))
                    right = multiply(generator_diagram(k, p), generator_diagram(n + p - 1, p))
                    if left != right:
                        failures.append(f"p={p}: x{n} x{k} != x{k} x{n + p - 1}")
        return checked, failures

    def check_group_laws(self) -> CheckOutcome:
        failures = []
        checked = 0
        for p in (2, 3):
            elements = [eval_word(Word((letter,), p)) for letter in alphabet(5)]
            for a, b, c in product(elements, repeat=3):
                checked += 1
                if multiply(multiply(a, b), c) != multiply(a, multiply(b, c)):
                    failures.append(f"p={p}: associativity fails for {a} {b} {c}")
            for a in elements:
                if multiply(a, identity(p)) != a or multiply(a, inverse(a)) != identity(p):
                    failures.append(f"p={p}: identity or inverse law fails for {a}")
        return checked, failures

    def check_abelianization(self) -> CheckOutcome:
        failures = []
        for k in range(6):
            image = abelianization(generator_diagram(k, 2))
            expected = (1, -1) if k == 0 else (0, -1)
            if (image.left, image.right) != expected:
                failures.append(f"pi(y{k}) = ({image.left}, {image.right}), expected {expected}")
        rng = self._rng("abelianization")
        for _ in range(100):
            g, h = eval_word(random_word(rng, 4, 2, 5)), eval_word(random_word(rng, 4, 2, 5))
            if abelianization(multiply(g, h)) != abelianization(g) + abelianization(h):
                failures.append(f"pi not additive on {g} and {h}")
            image = abelianization(g)
            if slopes_at_ends(g) != (Fraction(2) ** image.left, Fraction(2) ** image.right):
                failures.append(f"end slopes of {g} do not match pi = ({image.left}, {image.right})")
        return 106, failures

    def check_shifts(self) -> CheckOutcome:
        failures = []
        for i in range(6):
            if shift_right(generator_diagram(i, 2)) != generator_diagram(i + 1, 2):
                failures.append(f"shift_right(y{i}) != y{i + 1}")
        for p in (2, 3):
            if shift_left(identity(p)) != identity(p):
                failures.append(f"shift_left of the identity in F_{p} is not trivial")
        return 8, failures

    def check_embeddings(self) -> CheckOutcome:
        failures = []
        checked = 0
        for word in all_words(min(self.max_length, 4), 3, 2):
            checked += 1
            image = eval_word(iota_word(word))
            if iota_diagram(eval_word(word)) != image:
                failures.append(f"iota disagrees on {format_word(word, 'y')}")
            if is_neutral(word) and image != identity(3):
                failures.append(f"iota of neutral {format_word(word, 'y')} is not trivial")
        for word in all_words(min(self.max_length, 3), 3, 3):
            checked += 1
            image = eval_word(alpha_word(word))
            if alpha_diagram(eval_word(word)) != image:
                failures.append(f"alpha disagrees on {format_word(word)}")
            if theta_diagram(image) != 1 or not rect_membership(image, 1, 2):
                failures.append(f"alpha({format_word(word)}) is not in the oriented subgroup")
        return checked, failures

    def check_reduction_order(self) -> CheckOutcome:
        rng = self._rng("reduction")
        failures = []
        for _ in range(200):
            p = rng.choice((2, 3))
            diagram = random_inflation(eval_word(random_word(rng, 3, p, 4)), 4, rng)
            expected = reduce(diagram)
            if reduce(diagram, chooser=rng.choice) != expected or reduce(expected) != expected:
                failures.append(f"reduction of {diagram} depends on order")
        return 200, failures

    def check_piecewise_linear(self) -> CheckOutcome:
        rng = self._rng("piecewise")
        failures = []
        points = [Fraction(k, 64) for k in range(65)]
        for _ in range(100):
            p = rng.choice((2, 3))
            a, b = eval_word(random_word(rng, 3, p, 4)), eval_word(random_word(rng, 3, p, 4))
            ab = multiply(a, b)
            for t in points:
                if apply(ab, t) != apply(b, apply(a, t)):
                    failures.append(f"(ab)({t}) != b(a({t})) for {a} and {b}")
                    break
        return 100, failures

    # Oriented subgroup

    def check_parity_oracle(self) -> CheckOutcome:
        failures = []
        checked = 0
        for word in all_words(self.max_length, 4, 2):
            checked += 1
            verdict = theta(word)
            if verdict != int(parity_membership(eval_word(word))):
                failures.append(f"{format_word(word, 'y')}: theta={verdict} disagrees with parity test")
            if theta(word.inverse()) != verdict:
                failures.append(f"{format_word(word, 'y')}: theta not closed under inverse")
        return checked, failures

    def check_length_two(self) -> CheckOutcome:
        failures = []
        checked = 0
        for i, j in product(range(7), repeat=2):
            for m, n in product((1, -1), repeat=2):
                checked += 1
                word = Word((Letter(i, m), Letter(j, n)), 2)
                trivial = i == j and m == -n
                expected = trivial or (j == i + 1 and m == n == 1) or (i == j + 1 and m == n == -1)
                if bool(theta(word)) != expected:
                    failures.append(f"theta({format_word(word, 'y')}) = {theta(word)}")
        return checked, failures

    def check_graph_shape(self) -> CheckOutcome:
        failures = []
        checked = 0
        for word in all_words(min(self.max_length, 3), 4, 2):
            checked += 1
            diagram = iota_diagram(eval_word(word))
            graph = planar_graph(diagram)
            k = diagram.carets
            if graph.vertex_count != k + 1 or len(graph.edges) != 2 * k:
                failures.append(f"{format_word(word, 'y')}: {graph.vertex_count} vertices, {len(graph.edges)} edges")
            chromatic_at_two(graph)
        return checked, failures

    def check_representatives_and_shifts(self) -> CheckOutcome:
        rng = self._rng("representatives")
        failures = []
        for _ in range(200):
            g = eval_word(random_word(rng, rng.randint(0, 4), 2, 4))
            verdict = theta_diagram(g)
            lifted = iota_diagram(g)
            inflated = random_inflation(lifted, 3, rng)
            if chromatic_at_two(planar_graph(inflated)) // 2 != verdict:
                failures.append(f"{g}: verdict changes under inflation")
            if theta_diagram(shift_right(g)) != verdict or theta_diagram(shift_left(g)) != verdict:
                failures.append(f"{g}: verdict changes under shifts")
        return 200, failures

    # Moments

    def check_second_moment(self) -> CheckOutcome:
        failures = []
        for n in range(1, 10):
            count = theta_moment_unnormalized(2, n)
            if count != second_theta_moment(n):
                failures.append(f"c_{n}^2 = {count}, expected {second_theta_moment(n)}")
        return 9, failures

    def check_engine_equivalence(self) -> CheckOutcome:
        failures = []
        checked = 0
        for p in (2, 3):
            for d in range(0, min(self.max_length, 6) + 1):
                for n in (1, 2):
                    checked += 1
                    brute, mitm = count_neutral_brute(d, n, p), count_neutral_mitm(d, n, p)
                    if brute != mitm:
                        failures.append(f"d={d} n={n} p={p}: brute {brute} != mitm {mitm}")
        return checked, failures

    def check_odd_moments(self) -> CheckOutcome:
        failures = []
        for d in (1, 3):
            for n in (1, 2):
                for engine in (Engine.BRUTE, Engine.DP):
                    count = theta_moment_unnormalized(d, n, engine)
                    if count:
                        failures.append(f"c_{n}^{d} = {count} with {engine.value}")
        return 8, failures

    def check_rainbow(self) -> CheckOutcome:
        failures = []
        checked = 0
        for d in (2, 4, 6):
            for partition, count in rainbow_count(d).items():
                checked += 1
                if count != double_factorial(d):
                    failures.append(f"d={d} {partition}: {count} permutations")
        return checked, failures

    def check_counting_bounds(self) -> CheckOutcome:
        failures = []
        checked = 0
        for n in range(1, 13):
            histogram = tau_histogram(2, n, 2)
            checked += 1
            if histogram.total != count_neutral_mitm(2, n, 2):
                failures.append(f"d=2 n={n}: histogram total {histogram.total}")
            for record in bound_report(histogram):
                if record.verdicts["upper_corrected"] != "holds" or record.verdicts["lower"] == "fails":
                    failures.append(f"d=2 n={n} tau={record.tau}: {record.verdicts}")
        return checked, failures


def random_tau_instance(rng: random.Random, d: int, p: int) -> Tuple[List[int], List[int], List[int]]:
    """A permutation with its forced exponents and gap-respecting indices."""
    tau = list(range(1, d + 1))
    rng.shuffle(tau)
    exponents = [1 if slot <= d // 2 else -1 for slot in tau]
    gap = (4 * p - 4) * d
    half = [gap + rng.randrange(50)]
    for _ in range(d // 2 - 1):
        half.insert(0, half[0] + gap + 1 + rng.randrange(50))
    return tau, exponents, half