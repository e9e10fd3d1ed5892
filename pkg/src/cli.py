"""
CLI Module
Command-line harness for the growth, equivalence, Ext¹ and quiver experiments
"""

import argparse
import logging
import sys
from typing import List, Optional, Sequence

from src.config import Config
from src.errors import CategoryLabError, InfiniteHomSetError
from src.fincat import LocalisedCategory, PathCategory, load_quiver_document
from src.lambda_ext import ext1_group
from src.reports import ExperimentReport
from src.serre import hom_growth, verify_equivalence

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3


def _parse_sizes(text: str) -> List[int]:
    try:
        sizes = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"sizes must be comma-separated integers, got '{text}'")
    if not sizes:
        raise argparse.ArgumentTypeError("at least one size is required")
    if any(n < 0 for n in sizes):
        raise argparse.ArgumentTypeError("sizes must be non-negative")
    return sizes


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def cmd_growth(sizes: Sequence[int], depth: int) -> ExperimentReport:
    """
    Hom growth table, one row per n

    Args:
        sizes: Values of n
        depth: Recorded with the parameters

    Returns:
        ExperimentReport with the growth columns
    """
    report = ExperimentReport(
        experiment="growth",
        parameters={"sizes": list(sizes), "depth": depth},
        columns=list(Config.GROWTH_COLUMNS),
    )
    with report.timed():
        for n in sizes:
            pre_rank, count, post_rank, complete = hom_growth(n)
            report.add_row(n, pre_rank, count, post_rank)
            report.complete = report.complete and complete
            logger.info("📊 n=%d: %d → %d", n, pre_rank, post_rank)
    return report


def growth_matches(report: ExperimentReport) -> bool:
    return all(pre == 0 and count == n and post == n for n, pre, count, post in report.rows)


def cmd_verify_equivalence(n: int, depth: int) -> ExperimentReport:
    """Run the equivalence check for one n"""
    report = ExperimentReport(
        experiment="verify-equivalence",
        parameters={"n": n, "depth": depth},
        columns=[
            "n",
            "depth",
            "pre_quotient_rank",
            "localised_hom_count",
            "target_rank",
            "class_count",
            "injective",
            "independent",
            "surjective",
            "annihilated",
            "matches",
        ],
    )
    with report.timed():
        result = verify_equivalence(n, depth)
        report.add_row(
            result.n,
            result.depth,
            result.pre_quotient_rank,
            result.localised_hom_count,
            result.target_rank,
            result.class_count,
            result.injective,
            result.independent,
            result.surjective,
            result.annihilated,
            result.matches(),
        )
        report.complete = result.complete
    return report


def cmd_ext1(p: int, n: int, max_n: Optional[int] = None) -> ExperimentReport:
    """Brute-force Ext¹ report"""
    report = ExperimentReport(
        experiment="ext1",
        parameters={"field": p, "n": n, "max_n": max_n},
        columns=["p", "n", "dimension", "class_count", "split_count", "baer_additive", "injective"],
    )
    with report.timed():
        result = ext1_group(p, n, max_n)
        report.add_row(
            p,
            n,
            result.dimension,
            result.class_count,
            result.split_count,
            result.baer_additive and result.classes_recovered,
            result.injective,
        )
    return report


def ext1_matches(report: ExperimentReport) -> bool:
    p, n, dimension, classes, split, additive, injective = report.rows[0]
    return dimension == n and classes == p ** n and split == 1 and bool(additive) and bool(injective)


def cmd_quiver(path: str, bound: Optional[int] = None) -> ExperimentReport:
    """
    Hom table of a user-supplied quiver and its localisation

    Args:
        path: Quiver document
        bound: Zigzag length bound

    Returns:
        ExperimentReport with one row per vertex pair
    """
    quiver, sigma = load_quiver_document(path)
    if not quiver.is_acyclic():
        raise InfiniteHomSetError("infinite hom-set: the quiver has a cycle")
    paths = PathCategory(quiver)
    localised = LocalisedCategory(quiver, sigma, bound)
    report = ExperimentReport(
        experiment="quiver",
        parameters={"file": str(path), "sigma": list(sigma), "bound": localised.length_bound},
        columns=["source", "target", "path_count", "localised_count", "words", "complete"],
    )
    with report.timed():
        for a in quiver.vertices:
            for b in quiver.vertices:
                result = localised.localised_hom(a, b)
                report.add_row(
                    a,
                    b,
                    len(paths.hom(a, b)),
                    len(result.words),
                    " ".join(w.label for w in result.words),
                    result.complete,
                )
                report.complete = report.complete and result.complete
    return report


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Emit JSON instead of CSV.")
    common.add_argument("--out", metavar="FILE", help="Write the report to FILE.")
    common.add_argument("--verbose", action="store_true", help="Log progress to standard error.")

    parser = argparse.ArgumentParser(
        prog="category_lab",
        description="Serre quotients, localisation and Ext¹ experiments on finite quivers",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    growth = subparsers.add_parser("growth", parents=[common], help="Hom growth in n.")
    growth.add_argument("--sizes", type=_parse_sizes, default=[1, 2, 3], help="Comma-separated values of n.")
    growth.add_argument("--depth", type=_non_negative, default=Config.DEFAULT_DEPTH)

    verify = subparsers.add_parser(
        "verify-equivalence", parents=[common], help="Check the quotient against the localisation."
    )
    verify.add_argument("--n", type=_non_negative, default=1)
    verify.add_argument("--depth", type=_non_negative, default=Config.DEFAULT_DEPTH)

    ext1 = subparsers.add_parser("ext1", parents=[common], help="Brute-force Ext¹ of the trivial module.")
    ext1.add_argument("--field", type=int, default=2, help="Prime characteristic.")
    ext1.add_argument("--n", type=_non_negative, default=2)
    ext1.add_argument("--max-n", type=_non_negative, default=None, help="Override the size guardrail.")

    quiver = subparsers.add_parser("quiver", parents=[common], help="Hom table of a quiver document.")
    quiver.add_argument("file")
    quiver.add_argument("--bound", type=_positive, default=None, help="Zigzag length bound.")
    return parser


def _configure_logging(verbose: bool):
    level = logging.INFO if verbose else getattr(logging, str(Config.LOG_LEVEL).upper(), logging.WARNING)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    root = logging.getLogger()
    root.handlers = [handler]
    root.setLevel(level)


def _emit(report: ExperimentReport, as_json: bool, out: Optional[str]):
    text = report.to_json() + "\n" if as_json else report.to_csv()
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
        logger.info("💾 Report written to %s", out)
    else:
        sys.stdout.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)
    try:
        Config.validate()
        if args.command == "growth":
            report = cmd_growth(args.sizes, args.depth)
            ok = growth_matches(report)
        elif args.command == "verify-equivalence":
            report = cmd_verify_equivalence(args.n, args.depth)
            ok = bool(report.rows[0][-1])
        elif args.command == "ext1":
            report = cmd_ext1(args.field, args.n, args.max_n)
            ok = ext1_matches(report)
        else:
            report = cmd_quiver(args.file, args.bound)
            ok = True
    except (CategoryLabError, ValueError) as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_USAGE

    _emit(report, args.json, args.out)
    if not report.complete:
        logger.warning("⚠️ Result is inconclusive at the given bounds")
        return EXIT_INCONCLUSIVE
    return EXIT_OK if ok else EXIT_MISMATCH


if __name__ == "__main__":
    raise SystemExit(main())
