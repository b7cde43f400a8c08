"""Command-line shell: one subcommand per experiment.

Exit codes: 0 all checks pass, 1 verification failure, 2 usage or parse
error.  The EXSUFF_SEED environment variable supplies a default seed; an
explicit --seed always wins.
"""

from __future__ import annotations

import argparse
import os
import sys

from .harness import (
    DEFAULT_SEED,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VERIFICATION_FAILED,
    ORACLE_TOL,
    SEED_ENV_VAR,
    ExperimentConfig,
    UsageError,
    render_report,
    run_conditional_verify,
    run_rank_uniformity,
    run_rao_blackwell,
    run_symmetrize,
)


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--seed", type=int, default=None, help="master RNG seed (default: $EXSUFF_SEED or 0)")
    sub.add_argument("--n", type=int, default=2, help="vector dimension")
    sub.add_argument("--samples", type=int, default=1, help="number of draws / replicates")
    sub.add_argument("--sampler", default="", help="sampler spec, e.g. uniform, equicorr:0.5, urn:1,1,2")
    sub.add_argument("--estimand", default="", help="estimand spec, e.g. proj:1, wsum:2,1, thresh:0.5")
    sub.add_argument("--out", default="", help="report path (default: stdout)")
    sub.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="exsuff",
        description="Permutation symmetrization over order statistics, with verification oracles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-conditional", help="run the conditional-law oracle suite over the fixture catalog")
    _add_common(p)
    p.add_argument("--tol", type=float, default=ORACLE_TOL)

    p = sub.add_parser("rank-uniformity", help="chi-square test that sorting permutations are uniform")
    _add_common(p)

    p = sub.add_parser("rao-blackwell", help="raw vs symmetrized estimator variance comparison")
    _add_common(p)

    p = sub.add_parser("symmetrize", help="symmetrize an estimand over each input data row")
    _add_common(p)
    p.add_argument("--input", default="-", help="data file of numeric rows, or - for stdin")

    return parser


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise UsageError(f"{SEED_ENV_VAR}={env!r} is not an integer") from exc
    return DEFAULT_SEED


def _emit(cfg: ExperimentConfig, result, out_stream) -> None:
    text = render_report(cfg, result)
    if cfg.output_path:
        with open(cfg.output_path, "w") as fh:
            fh.write(text)
    else:
        out_stream.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = ExperimentConfig(
            command=args.command,
            seed=_resolve_seed(args),
            n=args.n,
            samples=args.samples,
            sampler_spec=args.sampler,
            estimand_spec=args.estimand,
            output_path=args.out,
            format=args.format,
        )
        if args.command == "verify-conditional":
            records = run_conditional_verify(cfg, tol=args.tol)
            _emit(cfg, records, sys.stdout)
            failed = [r for r in records if not r["passed"]]
            for r in failed:
                print(f"FAIL {r['fixture']} [{r['check']}]: {r['worst_case']}", file=sys.stderr)
            return EXIT_VERIFICATION_FAILED if failed else EXIT_OK

        if args.command == "rank-uniformity":
            report = run_rank_uniformity(cfg)
            _emit(cfg, report, sys.stdout)
            if report.degenerate:
                print("warning: every draw was tied; rank test is degenerate", file=sys.stderr)
            return EXIT_OK

        if args.command == "rao-blackwell":
            result = run_rao_blackwell(cfg)
            _emit(cfg, result, sys.stdout)
            return EXIT_OK

        if args.command == "symmetrize":
            if args.input == "-":
                text = sys.stdin.read()
            else:
                try:
                    with open(args.input) as fh:
                        text = fh.read()
                except OSError as exc:
                    raise UsageError(f"cannot read {args.input!r}: {exc}") from exc
            records = run_symmetrize(cfg, text)
            _emit(cfg, records, sys.stdout)
            errors = [r for r in records if "error" in r]
            for r in errors:
                print(f"row {r['row']}: {r['error']}", file=sys.stderr)
            return EXIT_VERIFICATION_FAILED if errors else EXIT_OK

        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
