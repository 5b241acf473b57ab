"""Synthetic-table generator and load-time benchmark.

Measures plain table load against load-plus-obfuscate over growing row
counts. The obfuscation leg includes a fresh gazetteer load each trial:
that is the pipeline's fixed cost, so the obfuscate/plain ratio starts
high and falls as per-row work amortizes it. The gazetteer load is also
timed on its own so the fixed cost is visible in the report.
"""

from __future__ import annotations

import csv
import random
import statistics
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

from .gazetteer import Gazetteer, load_gazetteer
from .model import (
    CREDIT_CARD_NUMBER,
    DATE_EXPRESSION,
    EMAIL_ADDRESS,
    PERSON_NAME,
    PHONE_NUMBER,
    GaussianParams,
    LaplaceParams,
    MaskParams,
    Policy,
    PolicyRule,
    StrategyKind,
    SurrogateParams,
)
from .tabular import ColumnSpec, DataDictionary, load_table, obfuscate_table

BENCH_COLUMNS = ("full_name", "dob", "phone", "email", "credit_card", "amount", "score")

_DOMAINS = ("example", "mailbox", "postbox", "letters", "inbox", "courier")


def bench_dictionary() -> DataDictionary:
    return DataDictionary(
        (
            ColumnSpec("full_name", PERSON_NAME, quasi_identifier=False),
            ColumnSpec("dob", DATE_EXPRESSION, quasi_identifier=True),
            ColumnSpec("phone", PHONE_NUMBER),
            ColumnSpec("email", EMAIL_ADDRESS),
            ColumnSpec("credit_card", CREDIT_CARD_NUMBER),
            ColumnSpec("amount", "numeric"),
            ColumnSpec("score", "numeric"),
        )
    )


def bench_policy(seed: int) -> Policy:
    return Policy(
        rules=(
            PolicyRule(StrategyKind.SURROGATE, kind=PERSON_NAME, params=SurrogateParams()),
            PolicyRule(StrategyKind.MASK, kind=DATE_EXPRESSION, params=MaskParams()),
            PolicyRule(StrategyKind.MASK, kind=PHONE_NUMBER, params=MaskParams()),
            PolicyRule(StrategyKind.MASK, kind=EMAIL_ADDRESS, params=MaskParams()),
            PolicyRule(StrategyKind.MASK, kind=CREDIT_CARD_NUMBER, params=MaskParams()),
            PolicyRule(StrategyKind.LAPLACE, column="amount", params=LaplaceParams(1.0, 1.0)),
            PolicyRule(StrategyKind.GAUSSIAN, column="score", params=GaussianParams(0.1)),
        ),
        seed=seed,
    )


def generate_table(path: str | Path, rows: int, seed: int, gazetteer: Gazetteer) -> None:
    """Write a deterministic synthetic CSV with the bench schema."""
    rng = random.Random(seed)
    firsts = gazetteer.records("first")
    lasts = gazetteer.records("last")
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(BENCH_COLUMNS)
        for _ in range(rows):
            first = rng.choice(firsts).name.capitalize()
            last = rng.choice(lasts).name.capitalize()
            dob = f"{rng.randint(1940, 2004)}-{rng.randint(1, 12):02d}-{rng.randint(1, 28):02d}"
            phone = f"({rng.randint(200, 999)}) {rng.randint(200, 999)}-{rng.randint(1000, 9999)}"
            email = f"{first.lower()}{rng.randint(1, 9999)}@{rng.choice(_DOMAINS)}.com"
            card = " ".join(f"{rng.randint(0, 9999):04d}" for _ in range(4))
            amount = f"{rng.uniform(10.0, 9999.0):.2f}"
            score = f"{rng.gauss(50.0, 10.0):.3f}"
            writer.writerow([f"{first} {last}", dob, phone, email, card, amount, score])


@dataclass(frozen=True)
class BenchRow:
    rows: int
    load_s: float
    load_obfuscate_s: float
    obfuscate_only_s: float
    load_min_s: float
    load_max_s: float
    load_obfuscate_min_s: float
    load_obfuscate_max_s: float

    @property
    def ratio(self) -> float:
        return self.load_obfuscate_s / self.load_s if self.load_s > 0 else float("inf")

    @property
    def throughput_rows_per_s(self) -> float:
        return self.rows / self.obfuscate_only_s if self.obfuscate_only_s > 0 else float("inf")

    def to_dict(self) -> dict:
        return {
            "rows": self.rows,
            "load_s": self.load_s,
            "load_obfuscate_s": self.load_obfuscate_s,
            "obfuscate_only_s": self.obfuscate_only_s,
            "ratio": self.ratio,
            "throughput_rows_per_s": self.throughput_rows_per_s,
            "load_min_s": self.load_min_s,
            "load_max_s": self.load_max_s,
            "load_obfuscate_min_s": self.load_obfuscate_min_s,
            "load_obfuscate_max_s": self.load_obfuscate_max_s,
        }


@dataclass(frozen=True)
class BenchReport:
    rows: tuple[BenchRow, ...]
    gazetteer_load_s: float
    trials: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "gazetteer_load_s": self.gazetteer_load_s,
            "trials": self.trials,
            "seed": self.seed,
            "rows": [r.to_dict() for r in self.rows],
        }

    def to_text(self) -> str:
        lines = [
            f"gazetteer load: {self.gazetteer_load_s:.3f} s"
            f" (fixed cost, included in the obfuscation leg)",
            f"{'rows':>10}  {'load_s':>10}  {'load+obf_s':>10}  {'ratio':>8}  {'rows/s':>10}",
        ]
        for r in self.rows:
            lines.append(
                f"{r.rows:>10}  {r.load_s:>10.3f}  {r.load_obfuscate_s:>10.3f}"
                f"  {r.ratio:>8.2f}  {r.throughput_rows_per_s:>10.0f}"
            )
        return "\n".join(lines)

    def write_csv(self, path: str | Path) -> None:
        with Path(path).open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["rows", "load_s", "load_obfuscate_s", "ratio", "throughput_rows_per_s"]
            )
            for r in self.rows:
                writer.writerow(
                    [r.rows, f"{r.load_s:.6f}", f"{r.load_obfuscate_s:.6f}",
                     f"{r.ratio:.4f}", f"{r.throughput_rows_per_s:.1f}"]
                )


def run_bench(
    row_counts: list[int],
    trials: int,
    seed: int,
    gazetteer_path: str | Path,
    threads: int = 1,
) -> BenchReport:
    """Benchmark plain load vs load+obfuscate; medians over `trials`."""
    if sorted(row_counts) != list(row_counts):
        raise ValueError("row counts must be ascending")
    gazetteer_path = Path(gazetteer_path)

    gaz_times = []
    for _ in range(max(1, trials)):
        t0 = time.perf_counter()
        gazetteer = load_gazetteer(gazetteer_path)
        gaz_times.append(time.perf_counter() - t0)

    dictionary = bench_dictionary()
    results = []
    with tempfile.TemporaryDirectory(prefix="tableguard-bench-") as tmp:
        for count in row_counts:
            table_path = Path(tmp) / f"bench_{count}.csv"
            generate_table(table_path, count, seed, gazetteer)
            load_times, full_times, obf_times = [], [], []
            for _ in range(max(1, trials)):
                t0 = time.perf_counter()
                load_table(table_path, dictionary)
                load_times.append(time.perf_counter() - t0)

                # Fresh policy per trial: each trial is one engine run.
                policy = bench_policy(seed)
                t0 = time.perf_counter()
                trial_gazetteer = load_gazetteer(gazetteer_path)
                table = load_table(table_path, dictionary)
                t1 = time.perf_counter()
                obfuscate_table(table, policy, trial_gazetteer, threads=threads)
                t2 = time.perf_counter()
                full_times.append(t2 - t0)
                obf_times.append(t2 - t1)
            results.append(
                BenchRow(
                    rows=count,
                    load_s=statistics.median(load_times),
                    load_obfuscate_s=statistics.median(full_times),
                    obfuscate_only_s=statistics.median(obf_times),
                    load_min_s=min(load_times),
                    load_max_s=max(load_times),
                    load_obfuscate_min_s=min(full_times),
                    load_obfuscate_max_s=max(full_times),
                )
            )
    return BenchReport(
        rows=tuple(results),
        gazetteer_load_s=statistics.median(gaz_times),
        trials=max(1, trials),
        seed=seed,
    )
