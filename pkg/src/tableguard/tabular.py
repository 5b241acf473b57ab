"""Relational-table pipeline: ingest CSV/JSONL with a data dictionary,
build per-row context, apply per-column policy, emit obfuscated tables.

Preprocessing order is fixed: whitespace-normalize text cells, drop exact
duplicate rows, record missing values as explicit nulls (never coerced to
empty strings). Cell entities are keyed by content, so obfuscation is
independent of row order and of how row batches are scheduled.
"""

from __future__ import annotations

import csv
import json
import logging
import re
import weakref
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from statistics import fmean, pstdev
from typing import Any, Mapping

from .engine import apply_clusters
from .errors import InvalidInput, ParseError, PolicyGap
from .gazetteer import Gazetteer
from .ledger import Ledger
from .model import (
    NUMERIC_VALUE,
    EntityCluster,
    EntityKind,
    EntitySpan,
    Policy,
    StrategyKind,
    normalize_value,
)
from .recognize import DEFAULT_CONFIG, RecognizerConfig, recognize_with

logger = logging.getLogger(__name__)

Cell = str | int | float | None

FREE_TEXT = "free_text"
NUMERIC = "numeric"

_WS = re.compile(r"\s+")
_DOB_NAMES = frozenset({"dob", "date_of_birth", "birth_date", "birthdate"})
_ISO_DATE = re.compile(r"(\d{4})-\d{2}-\d{2}\Z")
_US_DATE = re.compile(r"\d{1,2}/\d{1,2}/(\d{4})\Z")

# Tracks (policy -> numeric columns already released) so a second release
# of the same column under one policy can warn: per-value noise does not
# compose into a per-column privacy budget.
_dp_releases: "weakref.WeakKeyDictionary[Policy, set[str]]" = weakref.WeakKeyDictionary()


@dataclass(frozen=True)
class ColumnSpec:
    """Dictionary entry for one column: semantic kind plus metadata."""

    name: str
    kind: EntityKind | str = FREE_TEXT
    description: str = ""
    quasi_identifier: bool = False

    def __post_init__(self):
        if isinstance(self.kind, str) and self.kind not in (FREE_TEXT, NUMERIC):
            object.__setattr__(self, "kind", EntityKind.parse(self.kind))

    @property
    def kind_label(self) -> str:
        return self.kind if isinstance(self.kind, str) else str(self.kind)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind_label,
            "description": self.description,
            "quasi_identifier": self.quasi_identifier,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "ColumnSpec":
        return cls(
            name=d["name"],
            kind=d.get("kind", FREE_TEXT),
            description=d.get("description", ""),
            quasi_identifier=bool(d.get("quasi_identifier", False)),
        )


@dataclass(frozen=True)
class DataDictionary:
    columns: tuple[ColumnSpec, ...]

    def __post_init__(self):
        if isinstance(self.columns, list):
            object.__setattr__(self, "columns", tuple(self.columns))
        names = [c.name for c in self.columns]
        if len(names) != len(set(names)):
            raise InvalidInput("dictionary column names must be unique")

    def for_column(self, name: str) -> ColumnSpec | None:
        for spec in self.columns:
            if spec.name == name:
                return spec
        return None

    def quasi_identifier_columns(self) -> list[str]:
        return [c.name for c in self.columns if c.quasi_identifier]

    def to_dict(self) -> dict:
        return {"columns": [c.to_dict() for c in self.columns]}

    @classmethod
    def from_dict(cls, d: Mapping) -> "DataDictionary":
        return cls(tuple(ColumnSpec.from_dict(c) for c in d.get("columns", [])))


def load_dictionary(path: str | Path) -> DataDictionary:
    with Path(path).open(encoding="utf-8") as fh:
        return DataDictionary.from_dict(json.load(fh))


@dataclass(frozen=True)
class RowContext:
    """Read-only view of one row used during strategy invocation."""

    values: Mapping[str, Cell]
    dictionary: DataDictionary
    table_name: str = ""
    source: str = ""
    derived: Mapping[str, str] = field(default_factory=dict)


@dataclass
class TableData:
    """Parsed table plus preprocessing counters."""

    columns: list[str]
    rows: list[list[Cell]]
    dictionary: DataDictionary
    source_format: str = "csv"
    source: str = ""
    duplicates_removed: int = 0
    missing_values: int = 0

    @cached_property
    def name(self) -> str:
        return Path(self.source).stem if self.source else ""

    def column_index(self, name: str) -> int:
        try:
            return self.columns.index(name)
        except ValueError:
            raise InvalidInput(f"unknown column {name!r}") from None

    def column_values(self, name: str) -> list[Cell]:
        idx = self.column_index(name)
        return [row[idx] for row in self.rows]

    def row_dicts(self) -> list[dict[str, Cell]]:
        return [dict(zip(self.columns, row)) for row in self.rows]


def _normalize_cell(value: Cell) -> Cell:
    if isinstance(value, str):
        value = _WS.sub(" ", value).strip()
        return value if value else None
    return value


def _infer_dictionary(columns: list[str]) -> DataDictionary:
    return DataDictionary(tuple(ColumnSpec(name) for name in columns))


def load_table(
    path: str | Path,
    dictionary: DataDictionary | None = None,
    strict: bool = False,
) -> TableData:
    """Load a CSV (RFC 4180) or JSON-lines table and preprocess it.

    In strict mode every table column must have a dictionary entry;
    otherwise unknown columns default to free text.
    """
    path = Path(path)
    if path.suffix.lower() == ".jsonl":
        columns, raw_rows, fmt = _read_jsonl(path, dictionary)
    else:
        columns, raw_rows, fmt = _read_csv(path)

    if dictionary is None:
        dictionary = _infer_dictionary(columns)
    else:
        missing = [c for c in columns if dictionary.for_column(c) is None]
        if missing and strict:
            raise InvalidInput(f"columns missing from dictionary: {missing}")
        if missing:
            dictionary = DataDictionary(
                dictionary.columns + tuple(ColumnSpec(name) for name in missing)
            )

    normalized = [[_normalize_cell(v) for v in row] for row in raw_rows]
    seen: set[tuple] = set()
    rows: list[list[Cell]] = []
    duplicates = 0
    for row in normalized:
        key = tuple(row)
        if key in seen:
            duplicates += 1
            continue
        seen.add(key)
        rows.append(row)
    missing_values = sum(1 for row in rows for v in row if v is None)
    return TableData(
        columns=columns,
        rows=rows,
        dictionary=dictionary,
        source_format=fmt,
        source=str(path),
        duplicates_removed=duplicates,
        missing_values=missing_values,
    )


def _read_csv(path: Path) -> tuple[list[str], list[list[Cell]], str]:
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            columns = next(reader)
        except StopIteration:
            raise ParseError("empty file", path=path, line=1) from None
        rows: list[list[Cell]] = []
        for rownum, record in enumerate(reader, start=2):
            if not record:
                continue
            if len(record) != len(columns):
                raise ParseError(
                    f"expected {len(columns)} fields, got {len(record)}",
                    path=path,
                    line=rownum,
                )
            rows.append([v if v != "" else None for v in record])
    return columns, rows, "csv"


def _read_jsonl(
    path: Path, dictionary: DataDictionary | None
) -> tuple[list[str], list[list[Cell]], str]:
    records = []
    with path.open(encoding="utf-8") as fh:
        for rownum, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"bad JSON: {exc.msg}", path=path, line=rownum) from exc
            if not isinstance(obj, dict):
                raise ParseError("row is not a JSON object", path=path, line=rownum)
            records.append(obj)
    if dictionary is not None:
        columns = [c.name for c in dictionary.columns]
        extras = sorted({k for r in records for k in r} - set(columns))
        columns += extras
    else:
        columns = list(dict.fromkeys(k for r in records for k in r))
    rows = [[r.get(c) for c in columns] for r in records]
    return columns, rows, "jsonl"


def write_table(table: TableData, path: str | Path) -> None:
    """Write a table back out in its source format."""
    path = Path(path)
    if table.source_format == "jsonl":
        with path.open("w", encoding="utf-8") as fh:
            for row in table.rows:
                fh.write(json.dumps(dict(zip(table.columns, row))) + "\n")
    else:
        with path.open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(table.columns)
            for row in table.rows:
                writer.writerow(["" if v is None else v for v in row])


def derive_era_bucket(cell: Cell) -> str | None:
    """Decade bucket from an ISO or MM/DD/YYYY date; None when unparseable."""
    if not isinstance(cell, str):
        return None
    m = _ISO_DATE.match(cell) or _US_DATE.match(cell)
    if m is None:
        return None
    year = int(m.group(1))
    return f"{year - year % 10}s"


def _find_dob_column(table: TableData) -> int | None:
    for idx, name in enumerate(table.columns):
        if name.casefold() in _DOB_NAMES:
            return idx
    for idx, name in enumerate(table.columns):
        spec = table.dictionary.for_column(name)
        if spec and isinstance(spec.kind, EntityKind) and spec.kind.base == "date_expression":
            return idx
    return None


def _cell_cluster(kind: EntityKind, text: str, attributes: Mapping[str, str]) -> EntityCluster:
    normalized = normalize_value(kind, text)
    span = EntitySpan(0, len(text.encode("utf-8")), kind, text, normalized, 1.0)
    return EntityCluster(f"{kind}:{normalized}", kind, (span,), attributes)


def build_row_context(table: TableData, row: list[Cell], dob_idx: int | None) -> RowContext:
    derived = {}
    if dob_idx is not None:
        era = derive_era_bucket(row[dob_idx])
        if era:
            derived["era_bucket"] = era
    return RowContext(
        values=dict(zip(table.columns, row)),
        dictionary=table.dictionary,
        table_name=table.name,
        source=table.source,
        derived=derived,
    )


def obfuscate_table(
    table: TableData,
    policy: Policy,
    gazetteer: Gazetteer,
    config: RecognizerConfig = DEFAULT_CONFIG,
    threads: int = 1,
) -> tuple[TableData, Ledger]:
    """Obfuscate PII columns cell by cell with one table-wide ledger.

    Kind-typed cells become whole-cell entities; free-text cells go
    through full recognition. Cluster keys are content-derived, so equal
    entities get equal surrogates across rows and the output is
    independent of row order and thread count. Collision redraws are
    disabled here for exactly that reason.
    """
    col_rules = []
    free_text_cols: list[int] = []
    for idx, name in enumerate(table.columns):
        spec = table.dictionary.for_column(name) or ColumnSpec(name)
        if isinstance(spec.kind, EntityKind):
            match_kind = spec.kind
        elif spec.kind == NUMERIC:
            match_kind = NUMERIC_VALUE
        else:
            match_kind = None
        rule = policy.match(kind=match_kind, column=name)
        if rule is None and match_kind is not None and policy.default_action == "reject":
            raise PolicyGap(match_kind, name)
        if rule is not None and rule.strategy is StrategyKind.PASS:
            rule = None
        cell_kind = match_kind
        if rule is not None and cell_kind is None:
            # Column-selector rule on a free-text column: whole-cell entity.
            cell_kind = EntityKind("custom", f"column:{name}")
        if cell_kind is None:
            free_text_cols.append(idx)
        col_rules.append((cell_kind, rule))
        if rule is not None and rule.strategy is StrategyKind.LAPLACE:
            released = _dp_releases.setdefault(policy, set())
            if name in released:
                logger.warning(
                    "column %r released twice under one policy; per-value noise"
                    " does not account for composition",
                    name,
                )
            released.add(name)

    dob_idx = _find_dob_column(table)
    ledger = Ledger()

    # Phase 1 (parallel-safe): recognition for free-text cells is pure.
    def recognize_row(row: list[Cell]):
        out = {}
        for idx in free_text_cols:
            cell = row[idx]
            if isinstance(cell, str) and cell:
                out[idx] = recognize_with(policy.recognizer, cell, gazetteer, config)
        return out

    if free_text_cols and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            recognized = list(pool.map(recognize_row, table.rows))
    elif free_text_cols:
        recognized = [recognize_row(row) for row in table.rows]
    else:
        recognized = [{} for _ in table.rows]

    # Phase 2 (serial, row-major): assignment and rewriting.
    out_rows: list[list[Cell]] = []
    for row, row_recognized in zip(table.rows, recognized):
        context = build_row_context(table, row, dob_idx)
        new_row = list(row)
        for idx, (cell_kind, rule) in enumerate(col_rules):
            cell = row[idx]
            if cell is None:
                continue
            if rule is not None and cell_kind is not None:
                new_row[idx] = _obfuscate_cell(
                    cell, cell_kind, table.columns[idx], policy, gazetteer, ledger, context, rule
                )
            elif idx in row_recognized:
                spans, clusters = row_recognized[idx]
                text, _ = apply_clusters(
                    str(cell), clusters, policy, gazetteer, ledger,
                    column=table.columns[idx], collision_retry=False,
                )
                new_row[idx] = text
        out_rows.append(new_row)

    out = TableData(
        columns=list(table.columns),
        rows=out_rows,
        dictionary=table.dictionary,
        source_format=table.source_format,
        source=table.source,
        duplicates_removed=table.duplicates_removed,
        missing_values=table.missing_values,
    )
    return out, ledger


def _obfuscate_cell(
    cell: Cell,
    kind: EntityKind,
    column: str,
    policy: Policy,
    gazetteer: Gazetteer,
    ledger: Ledger,
    context: RowContext,
    rule=None,
) -> Cell:
    text = str(cell)
    cluster = _cell_cluster(kind, text, context.derived)
    entry = ledger.assign(
        cluster, policy, gazetteer, column=column, collision_retry=False, rule=rule
    )
    if entry is None:
        return cell
    rendered = ledger.render(entry, cluster.members[0])
    if isinstance(cell, (int, float)):
        return float(rendered)
    return rendered


def k_anonymity(table: TableData, quasi_identifier_columns: list[str]) -> int:
    """Minimum equivalence-class size over the projection onto the
    quasi-identifier columns."""
    if not table.rows:
        raise InvalidInput("k-anonymity needs a non-empty table")
    if not quasi_identifier_columns:
        raise InvalidInput("k-anonymity needs at least one quasi-identifier column")
    indexes = [table.column_index(c) for c in quasi_identifier_columns]
    groups: dict[tuple, int] = {}
    for row in table.rows:
        key = tuple(row[i] for i in indexes)
        groups[key] = groups.get(key, 0) + 1
    return min(groups.values())


def _as_floats(values: list[Cell]) -> list[float] | None:
    out = []
    for v in values:
        try:
            out.append(float(v))  # type: ignore[arg-type]
        except (TypeError, ValueError):
            return None
    return out


def _relative_error(original: float, obfuscated: float) -> float:
    if abs(original) < 1e-12:
        return abs(obfuscated - original)
    return abs(obfuscated - original) / abs(original)


def _sign(x: float) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class ColumnUtility:
    mean_rel_err: float
    std_rel_err: float
    min_rel_err: float
    max_rel_err: float
    trend_agreement: float

    def to_dict(self) -> dict:
        return dict(vars(self))

    def stat_errors(self) -> tuple[float, ...]:
        return (self.mean_rel_err, self.std_rel_err, self.min_rel_err, self.max_rel_err)


@dataclass(frozen=True)
class UtilityReport:
    """Aggregate-fidelity proxy: relative error of summary statistics plus
    a consecutive-delta trend agreement rate, per numeric column."""

    columns: Mapping[str, ColumnUtility]
    information_loss_pct: float
    excluded_columns: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "columns": {name: c.to_dict() for name, c in self.columns.items()},
            "information_loss_pct": self.information_loss_pct,
            "excluded_columns": list(self.excluded_columns),
            "excluded_column_count": len(self.excluded_columns),
        }


def utility_report(
    original: TableData, obfuscated: TableData, numeric_columns: list[str]
) -> UtilityReport:
    """Compare summary statistics of numeric columns before and after
    obfuscation; non-numeric (masked) columns are excluded and counted."""
    if original.columns != obfuscated.columns or len(original.rows) != len(obfuscated.rows):
        raise InvalidInput("tables must have the same shape")
    columns: dict[str, ColumnUtility] = {}
    excluded: list[str] = []
    errors: list[float] = []
    for name in numeric_columns:
        orig = _as_floats(original.column_values(name))
        obf = _as_floats(obfuscated.column_values(name))
        if orig is None or obf is None or not orig:
            excluded.append(name)
            continue
        stats = ColumnUtility(
            mean_rel_err=_relative_error(fmean(orig), fmean(obf)),
            std_rel_err=_relative_error(pstdev(orig), pstdev(obf)),
            min_rel_err=_relative_error(min(orig), min(obf)),
            max_rel_err=_relative_error(max(orig), max(obf)),
            trend_agreement=_trend_agreement(orig, obf),
        )
        columns[name] = stats
        errors.extend(stats.stat_errors())
    loss = 100.0 * fmean(errors) if errors else 0.0
    return UtilityReport(columns=columns, information_loss_pct=loss, excluded_columns=tuple(excluded))


def _trend_agreement(original: list[float], obfuscated: list[float]) -> float:
    if len(original) < 2:
        return 1.0
    agreements = sum(
        _sign(original[i + 1] - original[i]) == _sign(obfuscated[i + 1] - obfuscated[i])
        for i in range(len(original) - 1)
    )
    return agreements / (len(original) - 1)
