#!/usr/bin/env python3
"""Command-line front-end for brownthompson."""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

import orjson
from rich.console import Console
from rich.table import Table

from brownthompson.diagrams import abelianization, eval_word, format_diagram, iota_word, rect_membership, tree_to_string
from brownthompson.errors import BrownThompsonError, BudgetExceeded, NotConnected, ParseError, VerificationFailed, WrongArity
from brownthompson.moments import bound_report, moment_table, rainbow_count, tau_histogram
from brownthompson.oriented import parity_membership, planar_graph, theta, to_dot
from brownthompson.schemas import (
    DiagramModel,
    Engine,
    MembershipModel,
    MomentRequest,
    NormalizationTraceModel,
    OutputFormat,
    State,
)
from brownthompson.utils.logging import configure_level, get_logger
from brownthompson.verify import InvariantChecker
from brownthompson.words import format_word, normalize, parse_word

console = Console(highlight=False)
err_console = Console(stderr=True, highlight=False)
logger = get_logger(__name__)

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def parse_range(text: str) -> List[int]:
    """``A..B`` (inclusive) or a single integer."""
    start, separator, stop = text.partition("..")
    try:
        low = int(start)
        high = int(stop) if separator else low
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected A..B or an integer, got {text!r}")
    if high < low:
        raise argparse.ArgumentTypeError(f"Empty range {text!r}")
    return list(range(low, high + 1))


def dumps(data) -> str:
    return orjson.dumps(data, option=orjson.OPT_INDENT_2).decode()


class BrownThompsonCLI:
    """Dispatches parsed commands to the library."""

    def __init__(self, output: Optional[Path] = None):
        self.output = output
        self._buffered: List[str] = []

    def emit(self, text: str):
        """Command output goes to stdout or the -o file, never mixed with logs."""
        if self.output:
            self._buffered.append(text if text.endswith("\n") else text + "\n")
        else:
            console.out(text, highlight=False)

    def flush(self):
        """Write everything emitted so far to the -o file in one go."""
        if self.output and self._buffered:
            self.output.write_text("".join(self._buffered))
            err_console.print(f"[green]Wrote[/green] {self.output}")
            self._buffered.clear()

    def normalize(self, args: argparse.Namespace) -> int:
        word = parse_word(args.word, args.p)
        trace = normalize(word)
        model = NormalizationTraceModel(normal=format_word(trace.normal), tau=list(trace.tau), steps=trace.steps)
        self.emit(dumps(model.model_dump()))
        return EXIT_OK

    def eval(self, args: argparse.Namespace) -> int:
        word = parse_word(args.word, args.p)
        diagram = eval_word(word)
        record = DiagramModel(p=diagram.p, top=tree_to_string(diagram.top), bottom=tree_to_string(diagram.bottom))
        extra = {}
        if args.abelian or args.rect:
            if args.p != 2:
                raise WrongArity(2, args.p)
            image = abelianization(diagram)
            extra["abelian"] = [image.left, image.right]
            if args.rect:
                extra["rect"] = int(rect_membership(diagram, *args.rect))

        if args.format == "json":
            self.emit(dumps({**record.model_dump(), **extra}))
        else:
            lines = [format_diagram(diagram)]
            if "abelian" in extra:
                lines.append(f"abelian {extra['abelian'][0]} {extra['abelian'][1]}")
            if "rect" in extra:
                lines.append(f"rect {extra['rect']}")
            self.emit("\n".join(lines))
        return EXIT_OK

    def member(self, args: argparse.Namespace) -> int:
        if not args.oriented and not args.rect:
            raise ParseError(0, "", "member needs --oriented and/or --rect A B")
        word = parse_word(args.word, 2)
        diagram = eval_word(word)
        if args.rect:
            self.emit(str(int(rect_membership(diagram, *args.rect))))
        if not args.oriented:
            return EXIT_OK

        verdict = theta(word)
        parity = int(parity_membership(diagram))
        if verdict != parity:
            model = MembershipModel(word=args.word, theta=verdict, parity=parity, agree=False)
            logger.error(f"Oriented-subgroup tests disagree: {model.model_dump()}")
            err_console.print(f"[red]theta={verdict} but parity test={parity} for {args.word!r}[/red]")
            return EXIT_VERIFICATION
        self.emit(str(verdict))
        return EXIT_OK

    def graph(self, args: argparse.Namespace) -> int:
        word = parse_word(args.word, args.p)
        lifted = iota_word(word) if args.p == 2 else word
        self.emit(to_dot(planar_graph(eval_word(lifted))))
        return EXIT_OK

    def moments(self, args: argparse.Namespace) -> int:
        request = MomentRequest(
            state=args.state,
            p=args.p,
            d=args.d,
            n_values=args.n,
            engine=args.engine,
            workers=args.workers,
            budget=args.budget
        )
        table = moment_table(request)
        if args.format == OutputFormat.JSON.value:
            self.emit(dumps(table.model_dump(mode="json")))
        else:
            self.emit(table.to_csv())
        if any(row.error for row in table.rows):
            err_console.print("[yellow]Some cells exceeded the enumeration budget[/yellow]")
            return EXIT_BUDGET
        return EXIT_OK

    def bounds(self, args: argparse.Namespace) -> int:
        records = []
        for n in args.n:
            histogram = tau_histogram(args.d, n, args.p, args.engine, args.budget)
            records.extend(record.model_dump() for record in bound_report(histogram))
        self.emit(dumps(records))
        failed = [r for r in records if "fails" in (r["verdicts"]["lower"], r["verdicts"]["upper_corrected"])]
        return EXIT_VERIFICATION if failed else EXIT_OK

    def rainbow(self, args: argparse.Namespace) -> int:
        counts = rainbow_count(args.d)
        self.emit(dumps({str(partition): count for partition, count in sorted(counts.items(), key=lambda kv: str(kv[0]))}))
        return EXIT_OK

    def verify(self, args: argparse.Namespace) -> int:
        checker = InvariantChecker(seed=args.seed, max_length=args.max_length)
        reports = checker.run(args.suite)

        table = Table(title="Invariant suites")
        table.add_column("Suite", style="cyan")
        table.add_column("Check")
        table.add_column("Cases", justify="right")
        table.add_column("Result")
        table.add_column("Seconds", justify="right")
        for report in reports:
            for result in report.results:
                verdict = "[green]ok[/green]" if result.passed else f"[red]{len(result.failures)} failed[/red]"
                table.add_row(report.suite, result.name, str(result.checked), verdict, f"{result.elapsed_seconds:.2f}")
        err_console.print(table)

        self.emit(dumps([report.model_dump() for report in reports]))
        return EXIT_OK if all(report.passed for report in reports) else EXIT_VERIFICATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cli.py",
        description="Word calculus, tree diagrams and moment enumeration for Brown-Thompson groups F_p",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python cli.py normalize -p 5 "x1 x100^-1 x50 x1^-1 x100 x46^-1"
  python cli.py member --oriented "y0 y1"
  python cli.py graph --dot "y0"
  python cli.py moments --state theta -d 2 -n 1..9 --format csv
  python cli.py verify --suite all --seed 7
        """
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logs on stderr")
    parser.add_argument("-o", "--output", type=Path, help="Write command output to a file instead of stdout")
    commands = parser.add_subparsers(dest="command", required=True)

    normalize_parser = commands.add_parser("normalize", help="Print the normal form, tau and step count as JSON")
    normalize_parser.add_argument("-p", type=int, default=2)
    normalize_parser.add_argument("word")

    eval_parser = commands.add_parser("eval", help="Print the reduced tree diagram of a word")
    eval_parser.add_argument("-p", type=int, default=2)
    eval_parser.add_argument("--format", choices=["text", "json"], default="text")
    eval_parser.add_argument("--abelian", action="store_true", help="Also print the abelianization (p=2)")
    eval_parser.add_argument("--rect", type=int, nargs=2, metavar=("A", "B"), help="Also test membership in K_(A,B)")
    eval_parser.add_argument("word")

    member_parser = commands.add_parser("member", help="Subgroup membership tests for F_2 words")
    member_parser.add_argument("--oriented", action="store_true", help="theta and parity test, which must agree")
    member_parser.add_argument("--rect", type=int, nargs=2, metavar=("A", "B"))
    member_parser.add_argument("word")

    graph_parser = commands.add_parser("graph", help="Planar graph of a word (F_2 words are lifted to F_3)")
    graph_parser.add_argument("--dot", action="store_true", default=True)
    graph_parser.add_argument("-p", type=int, default=2, choices=[2, 3])
    graph_parser.add_argument("word")

    moments_parser = commands.add_parser("moments", help="Moment table over a range of n")
    moments_parser.add_argument("--state", choices=[s.value for s in State], required=True)
    moments_parser.add_argument("-p", type=int, default=2)
    moments_parser.add_argument("-d", type=int, required=True)
    moments_parser.add_argument("-n", type=parse_range, required=True, help="A..B inclusive")
    moments_parser.add_argument("--engine", choices=[e.value for e in Engine])
    moments_parser.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.CSV.value)
    moments_parser.add_argument("--workers", type=int)
    moments_parser.add_argument("--budget", type=int)

    bounds_parser = commands.add_parser("bounds", help="Counting-bound report per permutation")
    bounds_parser.add_argument("-p", type=int, default=2)
    bounds_parser.add_argument("-d", type=int, required=True)
    bounds_parser.add_argument("-n", type=parse_range, required=True)
    bounds_parser.add_argument("--engine", choices=["brute", "mitm"], default="mitm")
    bounds_parser.add_argument("--budget", type=int)

    rainbow_parser = commands.add_parser("rainbow", help="Permutations sending each pair partition to the rainbow")
    rainbow_parser.add_argument("-d", type=int, required=True)

    verify_parser = commands.add_parser("verify", help="Run invariant suites")
    verify_parser.add_argument("--suite", choices=["rewrite", "trees", "oriented", "moments", "all"], default="all")
    verify_parser.add_argument("--seed", type=int)
    verify_parser.add_argument("--max-length", type=int, help="Longest word in exhaustive sweeps")

    return parser


def run(argv: Optional[List[str]] = None) -> int:
    """Parse ``argv``, execute one command and return the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    if args.verbose:
        configure_level("DEBUG" if args.verbose > 1 else "INFO")

    cli = BrownThompsonCLI(output=args.output)
    try:
        return getattr(cli, args.command)(args)
    except BudgetExceeded as e:
        err_console.print(f"[yellow]Budget exceeded:[/yellow] {e}")
        return EXIT_BUDGET
    except (VerificationFailed, NotConnected) as e:
        logger.error(f"{type(e).__name__}: {e}")
        err_console.print(f"[red]Verification failed:[/red] {e}")
        return EXIT_VERIFICATION
    except (BrownThompsonError, ValueError) as e:
        err_console.print(f"[red]Error:[/red] {e}")
        return EXIT_USAGE
    finally:
        cli.flush()


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
