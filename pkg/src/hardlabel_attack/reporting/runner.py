"""
Batch execution of attacks over dataset rows, plus the budget, beam-width and
seed sweeps built on top of it.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import pandas as pd
from wasabi import msg

from ..core.config import AttackConfig
from ..core.datasets import DatasetFile, DatasetRow, sample_rows
from ..core.outcome import AttackOutcome
from ..core.text import Label, tokenize
from ..search.engine import AttackResources, attack
from ..victims.oracle import HardLabelOracle
from .metrics import RunReport, build_report

Rows = Sequence[tuple[int, DatasetRow]]

SWEEP_COLUMNS = ["asr", "mean_pert", "mean_sim", "mean_queries", "attacked", "skipped"]


def _attack_row(
    item: tuple[int, DatasetRow],
    oracle: HardLabelOracle,
    config: AttackConfig,
    resources: AttackResources,
) -> AttackOutcome:
    index, row = item
    return attack(
        tokenize(row.text),
        Label(id=row.label),
        oracle,
        config,
        resources,
        sample_id=index,
    )


def run_attacks(
    rows: Rows,
    oracle: HardLabelOracle,
    config: AttackConfig,
    resources: AttackResources,
    parallel: int = 1,
) -> RunReport:
    """
    Attack every row and aggregate the outcomes.

    With parallel > 1 up to that many attacks run in a thread pool. Each
    attack keeps its own ledger and random streams (derived from the seed and
    the row index), so outcomes do not depend on scheduling. Outcomes are
    always returned in row order.
    """
    if parallel < 1:
        raise ValueError("parallel must be at least 1")

    msg.info(
        f"Attacking {len(rows)} samples (budget {config.query_budget}, "
        f"beam {config.beam_size}, ranking {config.ranking.value}, "
        f"rule {config.sampling_rule.value})"
    )
    if parallel == 1:
        outcomes = [_attack_row(item, oracle, config, resources) for item in rows]
    else:
        with ThreadPoolExecutor(max_workers=parallel) as pool:
            outcomes = list(
                pool.map(
                    lambda item: _attack_row(item, oracle, config, resources), rows
                )
            )

    report = build_report(outcomes, config)
    msg.good(report.summary_line())
    return report


def _sweep_row(key: str, value: int, report: RunReport) -> dict:
    aggregates = report.aggregates()
    return {key: value, **{column: aggregates[column] for column in SWEEP_COLUMNS}}


def _check_values(values: Sequence[int], name: str, increasing: bool) -> None:
    if not values:
        raise ValueError(f"{name} sweep needs at least one value")
    if any(v < 1 for v in values):
        raise ValueError(f"{name} values must be positive")
    if increasing and any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError(f"{name} values must be strictly increasing")


def budget_sweep(
    rows: Rows,
    oracle: HardLabelOracle,
    config: AttackConfig,
    resources: AttackResources,
    budgets: Sequence[int],
    parallel: int = 1,
) -> pd.DataFrame:
    """
    One full run per budget with the same seed and rows.

    An "auto" surrogate cap depends on the budget, which would change the
    word ranking between runs. It is pinned to the smallest budget's value so
    every larger budget replays the smaller run and then keeps searching,
    which makes the success rate non-decreasing in the budget.
    """
    _check_values(budgets, "budget", increasing=True)
    base = config
    if config.lime_query_cap == "auto":
        base = config.model_copy(
            update={"lime_query_cap": max(1, budgets[0] // 2)}
        )

    records = []
    for budget in budgets:
        run_config = AttackConfig(**{**base.model_dump(), "query_budget": budget})
        msg.divider(f"Budget {budget}")
        report = run_attacks(rows, oracle, run_config, resources, parallel)
        records.append(_sweep_row("budget", budget, report))
    return pd.DataFrame.from_records(records)


def beam_sweep(
    rows: Rows,
    oracle: HardLabelOracle,
    config: AttackConfig,
    resources: AttackResources,
    beams: Sequence[int],
    parallel: int = 1,
) -> pd.DataFrame:
    """One full run per beam width, everything else held fixed."""
    _check_values(beams, "beam", increasing=False)
    records = []
    for beam in beams:
        run_config = AttackConfig(**{**config.model_dump(), "beam_size": beam})
        msg.divider(f"Beam {beam}")
        report = run_attacks(rows, oracle, run_config, resources, parallel)
        records.append(_sweep_row("beam", beam, report))
    return pd.DataFrame.from_records(records)


def run_seeds(
    dataset: DatasetFile,
    sample: int | None,
    oracle: HardLabelOracle,
    config: AttackConfig,
    resources: AttackResources,
    seeds: Sequence[int],
    parallel: int = 1,
) -> list[tuple[int, RunReport]]:
    """Repeat a run once per seed; each seed also draws its own dataset sample."""
    reports = []
    for seed in seeds:
        run_config = AttackConfig(**{**config.model_dump(), "seed": seed})
        msg.divider(f"Seed {seed}")
        rows = sample_rows(dataset, sample, seed)
        reports.append((seed, run_attacks(rows, oracle, run_config, resources, parallel)))
    return reports


def seed_summary(reports: Sequence[tuple[int, RunReport]]) -> pd.DataFrame:
    """Per-seed aggregate rows followed by a "mean" row."""
    frame = pd.DataFrame.from_records(
        [_sweep_row("seed", seed, report) for seed, report in reports]
    )
    mean = frame[SWEEP_COLUMNS].mean(numeric_only=True).to_dict()
    frame["seed"] = frame["seed"].astype(object)
    return pd.concat(
        [frame, pd.DataFrame.from_records([{"seed": "mean", **mean}])],
        ignore_index=True,
    )
