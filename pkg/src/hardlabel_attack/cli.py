"""
Command-line entry point: attack runs, budget/beam sweeps and victim training.

Exit codes: 0 on completion, 2 on invalid flags or configuration, 1 on file
or transport failures.
"""

import argparse
import os
from typing import Optional, Sequence

from pydantic import ValidationError
from wasabi import msg

from .core.config import AttackConfig, KernelDistance, RankingSource, SamplingRule
from .core.datasets import bundled_path, load_dataset, sample_rows
from .core.errors import (
    DatasetFormatError,
    DimensionMismatch,
    RemoteVictimError,
    ReportWriteError,
    VectorParseError,
)
from .core.text import tokenize
from .embeddings.stopwords import load_stop_words
from .embeddings.vectors import load_vectors
from .reporting.runner import beam_sweep, budget_sweep, run_attacks, run_seeds, seed_summary
from .reporting.writer import write_frame, write_report
from .search.engine import AttackResources
from .similarity.providers import MeanEmbeddingSimilarity, RemoteSimilarity
from .victims.lexicon import LexiconVictim
from .victims.naive_bayes import NaiveBayesVictim, train_naive_bayes
from .victims.oracle import HardLabelOracle
from .victims.remote import RemoteVictim

DEFAULT_DATASET = "toy_dataset.tsv"
DEFAULT_VECTORS = "toy_vectors.txt"
DEFAULT_LEXICON = "toy_lexicon.json"

# Failures of files or the network, as opposed to bad flags.
IO_ERRORS = (
    OSError,
    RemoteVictimError,
    ReportWriteError,
    VectorParseError,
    DimensionMismatch,
    DatasetFormatError,
)


def parse_int_list(text: str) -> list[int]:
    """Parse "25,50,100" into [25, 50, 100]."""
    parts = [p.strip() for p in text.split(",")]
    if not text.strip() or any(not p.lstrip("-").isdigit() for p in parts):
        raise ValueError(f"expected a comma-separated list of integers, got {text!r}")
    return [int(p) for p in parts]


def _seed_list(text: str) -> list[int]:
    try:
        return parse_int_list(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _lime_cap(text: str):
    if text == "auto":
        return text
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'auto', got {text!r}")


def load_victim(
    spec: str, num_classes: int = 2, timeout: float = 10.0, retries: int = 3
) -> HardLabelOracle:
    """Build a victim from `lexicon:PATH`, `nb:PATH` or `remote:URL`."""
    kind, _, target = spec.partition(":")
    if kind == "lexicon" and target:
        return LexiconVictim.load(target)
    if kind == "nb" and target:
        return NaiveBayesVictim.load(target)
    if kind == "remote":
        return RemoteVictim(
            target or None, num_classes=num_classes, timeout=timeout, retries=retries
        )
    raise ValueError(
        f"victim must be lexicon:PATH, nb:PATH or remote:URL, got {spec!r}"
    )


def load_similarity(spec: str, store, timeout: float = 10.0, retries: int = 3):
    """`builtin`, `remote` (SIMILARITY_ENDPOINT), `remote:URL` or a bare http(s) URL."""
    if spec == "builtin":
        return MeanEmbeddingSimilarity(store)
    if spec.startswith(("http://", "https://")):
        return RemoteSimilarity(spec, timeout=timeout, retries=retries)
    kind, _, target = spec.partition(":")
    if kind == "remote":
        return RemoteSimilarity(target or None, timeout=timeout, retries=retries)
    raise ValueError(f"similarity must be builtin or remote:URL, got {spec!r}")


def config_from_args(args: argparse.Namespace) -> AttackConfig:
    return AttackConfig(
        query_budget=args.budget,
        pert_threshold=args.pert_max,
        beam_size=args.beam,
        synonym_k=args.k,
        kernel_width=args.sigma,
        ridge_lambda=args.ridge_lambda,
        lime_query_cap=args.lime_cap,
        neighborhood_size=args.neighborhood,
        kernel_distance=KernelDistance(args.kernel_distance),
        ranking=RankingSource(args.ranking),
        sampling_rule=SamplingRule(args.rule),
        asr_includes_skipped=args.asr_includes_skipped,
        seed=args.seed,
    )


def _prepare(args: argparse.Namespace):
    config = config_from_args(args)
    msg.divider("Effective configuration")
    msg.table(config.to_dict())

    store = load_vectors(args.vectors)
    resources = AttackResources(
        store=store,
        stop_words=load_stop_words(args.stop_words),
        similarity=load_similarity(args.similarity, store, args.timeout, args.retries),
    )
    victim = load_victim(args.victim, args.num_classes, args.timeout, args.retries)
    dataset = load_dataset(args.dataset, args.delimiter)
    return config, resources, victim, dataset


def _seed_path(path: str, seed: int) -> str:
    stem, ext = os.path.splitext(path)
    return f"{stem}.seed{seed}{ext}"


def cmd_attack(args: argparse.Namespace) -> int:
    config, resources, victim, dataset = _prepare(args)

    if args.seeds:
        reports = run_seeds(
            dataset, args.sample, victim, config, resources, args.seeds, args.parallel
        )
        for seed, report in reports:
            write_report(report, _seed_path(args.out, seed), args.format)
        summary = seed_summary(reports)
        stem, _ = os.path.splitext(args.out)
        write_frame(summary, f"{stem}.seeds.csv")
        msg.table(summary.values.tolist(), header=list(summary.columns))
        return 0

    rows = sample_rows(dataset, args.sample, config.seed)
    report = run_attacks(rows, victim, config, resources, args.parallel)
    write_report(report, args.out, args.format)
    print(report.summary_line())
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    kind, values_text = args.sweep
    if kind not in ("budget", "beam"):
        raise ValueError(f"sweep kind must be budget or beam, got {kind!r}")
    values = parse_int_list(values_text)

    config, resources, victim, dataset = _prepare(args)
    rows = sample_rows(dataset, args.sample, config.seed)
    sweep = budget_sweep if kind == "budget" else beam_sweep
    table = sweep(rows, victim, config, resources, values, args.parallel)

    write_frame(table, args.out)
    msg.table(table.values.tolist(), header=list(table.columns))
    return 0


def cmd_train_victim(args: argparse.Namespace) -> int:
    dataset = load_dataset(args.dataset, args.delimiter)
    corpus = [(row.text, row.label) for row in dataset.rows]
    victim = train_naive_bayes(corpus, alpha=args.alpha)

    try:
        victim.save(args.out)
    except OSError as e:
        raise ReportWriteError(f"cannot write {args.out}: {e}") from e

    correct = sum(
        victim.predict(tokenize(text)).id == label for text, label in corpus
    )
    accuracy = correct / len(corpus)
    msg.good(f"Saved model to {args.out}")
    print(f"Training accuracy: {accuracy * 100:.2f}% ({correct}/{len(corpus)})")
    return 0


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    data = parser.add_argument_group("inputs")
    data.add_argument("--dataset", default=bundled_path(DEFAULT_DATASET))
    data.add_argument("--delimiter", default="\t")
    data.add_argument("--vectors", default=bundled_path(DEFAULT_VECTORS))
    data.add_argument("--stop-words", default=None, help="defaults to the bundled list")
    data.add_argument(
        "--victim",
        default=f"lexicon:{bundled_path(DEFAULT_LEXICON)}",
        help="lexicon:PATH | nb:PATH | remote:URL",
    )
    data.add_argument("--similarity", default="builtin", help="builtin | remote:URL")
    data.add_argument("--num-classes", type=int, default=2, help="remote victims only")
    data.add_argument("--timeout", type=float, default=10.0)
    data.add_argument("--retries", type=int, default=3)

    attack = parser.add_argument_group("attack")
    attack.add_argument("--budget", type=int, default=100)
    attack.add_argument("--beam", type=int, default=10)
    attack.add_argument("--k", type=int, default=50)
    attack.add_argument("--sigma", type=float, default=25.0)
    attack.add_argument("--pert-max", type=float, default=0.10)
    attack.add_argument("--ridge-lambda", type=float, default=1e-3)
    attack.add_argument("--lime-cap", type=_lime_cap, default="auto")
    attack.add_argument("--neighborhood", type=int, default=None)
    attack.add_argument(
        "--kernel-distance",
        choices=[d.value for d in KernelDistance],
        default=KernelDistance.COSINE.value,
    )
    attack.add_argument(
        "--ranking",
        choices=[r.value for r in RankingSource],
        default=RankingSource.LIME.value,
    )
    attack.add_argument(
        "--rule",
        choices=[r.value for r in SamplingRule],
        default=SamplingRule.STRATIFIED.value,
    )
    attack.add_argument("--asr-includes-skipped", action="store_true")
    attack.add_argument("--seed", type=int, default=0)

    run = parser.add_argument_group("run")
    run.add_argument("--sample", type=int, default=None, help="rows to attack")
    run.add_argument("--parallel", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hardlabel-attack",
        description="Query-budgeted hard-label word-substitution attacks.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    attack = commands.add_parser("attack", help="attack sampled dataset rows")
    _add_run_flags(attack)
    attack.add_argument("--out", default="report.json")
    attack.add_argument("--format", choices=["json", "csv"], default="json")
    attack.add_argument(
        "--seeds", type=_seed_list, default=None, help="e.g. 1,2,3; one report per seed"
    )
    attack.set_defaults(handler=cmd_attack)

    sweep = commands.add_parser("sweep", help="budget or beam-width sweep")
    _add_run_flags(sweep)
    sweep.add_argument(
        "--sweep", nargs=2, metavar=("KIND", "VALUES"), required=True,
        help="budget|beam and a comma-separated list, e.g. --sweep beam 1,5,10,20",
    )
    sweep.add_argument("--out", default="sweep.csv")
    sweep.set_defaults(handler=cmd_sweep)

    train = commands.add_parser("train-victim", help="train a Naive Bayes victim")
    train.add_argument("--dataset", default=bundled_path(DEFAULT_DATASET))
    train.add_argument("--delimiter", default="\t")
    train.add_argument("--out", required=True)
    train.add_argument("--alpha", type=float, default=1.0)
    train.set_defaults(handler=cmd_train_victim)

    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except IO_ERRORS as e:
        msg.fail(str(e))
        return 1
    except (ValidationError, ValueError) as e:
        msg.fail(f"Invalid input: {e}")
        return 2
