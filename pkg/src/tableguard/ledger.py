"""Run-scoped surrogate ledger.

One surrogate per cluster key, assigned once and rendered consistently
for full and partial mentions. Consistency scope is a single engine run;
cross-run consistency requires importing a prior export, never implicit.
Export is JSON lines ordered by cluster first occurrence.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

from .errors import LedgerIntegrityError, PolicyGap, TableGuardError
from .gazetteer import Gazetteer
from .model import (
    EntityCluster,
    EntityKind,
    EntitySpan,
    GaussianParams,
    LaplaceParams,
    MaskParams,
    Policy,
    StrategyKind,
    SurrogateRecord,
)
from .stream import DeterministicStream
from . import strategies

logger = logging.getLogger(__name__)

# Redraw budget for surrogate collisions across distinct clusters in one
# document; past it the collision is allowed and logged.
MAX_COLLISION_REDRAWS = 8


@dataclass(frozen=True)
class LedgerEntry:
    cluster_key: str
    kind: EntityKind
    original_representative: str
    surrogate: SurrogateRecord | str
    strategy: StrategyKind
    draw_count: int

    def to_dict(self) -> dict:
        surrogate = (
            self.surrogate.to_dict()
            if isinstance(self.surrogate, SurrogateRecord)
            else self.surrogate
        )
        return {
            "cluster_key": self.cluster_key,
            "kind": str(self.kind),
            "original_representative": self.original_representative,
            "surrogate": surrogate,
            "strategy": self.strategy.value,
            "draw_count": self.draw_count,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "LedgerEntry":
        surrogate = d["surrogate"]
        if isinstance(surrogate, Mapping):
            surrogate = SurrogateRecord.from_dict(surrogate)
        return cls(
            cluster_key=d["cluster_key"],
            kind=EntityKind.parse(d["kind"]),
            original_representative=d["original_representative"],
            surrogate=surrogate,
            strategy=StrategyKind(d["strategy"]),
            draw_count=int(d["draw_count"]),
        )


def _format_like(original: str, value: float) -> str:
    """Render a perturbed number with the original's decimal places."""
    text = original.strip()
    if "e" in text.lower():
        return repr(value)
    if "." in text:
        return f"{value:.{len(text.split('.', 1)[1])}f}"
    return str(int(round(value)))


def _parse_number(surface: str) -> float:
    try:
        return float(surface)
    except (TypeError, ValueError):
        raise TableGuardError(f"cell value {surface!r} is not numeric") from None


class Ledger:
    """Cluster key -> surrogate record, insertion-ordered by first
    occurrence. Assignment is single-writer; reads are concurrent."""

    def __init__(self):
        self._entries: dict[str, LedgerEntry] = {}
        self._surrogate_fulls: set[str] = set()
        self._replacement_surfaces: set[str] = set()

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ledger):
            return NotImplemented
        return [e.to_dict() for e in self.entries()] == [e.to_dict() for e in other.entries()]

    def entries(self) -> list[LedgerEntry]:
        return list(self._entries.values())

    def get(self, cluster_key: str) -> LedgerEntry | None:
        return self._entries.get(cluster_key)

    def replacement_surfaces(self) -> frozenset[str]:
        """Casefolded strings this ledger has issued as replacements; the
        residual scan uses them to tell surrogates from surviving PII."""
        return frozenset(self._replacement_surfaces)

    def assign(
        self,
        cluster: EntityCluster,
        policy: Policy,
        gazetteer: Gazetteer | None = None,
        column: str | None = None,
        collision_retry: bool = True,
        rule=None,
    ) -> LedgerEntry | None:
        """Resolve the policy rule for the cluster and fix its surrogate.

        First assignment wins: a repeated cluster key returns the stored
        entry unchanged. Returns None when the resolved action is
        pass-through; raises PolicyGap when no rule matches and the policy
        rejects unhandled kinds. Callers that already resolved the rule
        for this (kind, column) may pass it to skip re-resolution.
        """
        existing = self._entries.get(cluster.cluster_key)
        if existing is not None:
            return existing
        if rule is None:
            rule = policy.match(kind=cluster.kind, column=column)
        if rule is None:
            if policy.default_action == "reject":
                raise PolicyGap(cluster.kind, column)
            return None
        if rule.strategy is StrategyKind.PASS:
            return None

        rep = cluster.representative
        draws = 0
        if rule.strategy is StrategyKind.MASK:
            surrogate: SurrogateRecord | str = _apply_mask(cluster.kind, rep.surface, rule.params)
        elif rule.strategy is StrategyKind.GAUSSIAN:
            stream = DeterministicStream(policy.seed, cluster.cluster_key)
            value = strategies.perturb_gaussian(
                _parse_number(rep.surface), rule.params.sigma, stream
            )
            surrogate = _format_like(rep.surface, value)
            draws = stream.draws
        elif rule.strategy is StrategyKind.LAPLACE:
            stream = DeterministicStream(policy.seed, cluster.cluster_key)
            value = strategies.dp_laplace(
                _parse_number(rep.surface), rule.params.epsilon, rule.params.sensitivity, stream
            )
            surrogate = _format_like(rep.surface, value)
            draws = stream.draws
        elif rule.strategy is StrategyKind.SURROGATE:
            stream = DeterministicStream(policy.seed, cluster.cluster_key)
            surrogate = self._draw_surrogate(cluster, gazetteer, rule.params, stream, collision_retry)
            draws = stream.draws
        else:  # pragma: no cover - enum is exhaustive
            raise TableGuardError(f"unhandled strategy {rule.strategy}")

        entry = LedgerEntry(
            cluster_key=cluster.cluster_key,
            kind=cluster.kind,
            original_representative=rep.surface,
            surrogate=surrogate,
            strategy=rule.strategy,
            draw_count=draws,
        )
        self._entries[cluster.cluster_key] = entry
        self._remember_surfaces(entry)
        return entry

    def _draw_surrogate(
        self,
        cluster: EntityCluster,
        gazetteer: Gazetteer | None,
        params,
        stream: DeterministicStream,
        collision_retry: bool,
    ) -> SurrogateRecord:
        def draw() -> SurrogateRecord:
            if cluster.kind.base == "weekday_name":
                day = strategies.surrogate_weekday(cluster.representative.surface, stream)
                return SurrogateRecord(full=day, given=day)
            if gazetteer is None:
                raise TableGuardError("surrogate strategy needs a gazetteer")
            return strategies.surrogate_person_name(cluster, gazetteer, params, stream)

        record = draw()
        if collision_retry:
            redraws = 0
            while record.full.casefold() in self._surrogate_fulls and redraws < MAX_COLLISION_REDRAWS:
                record = draw()
                redraws += 1
            if record.full.casefold() in self._surrogate_fulls:
                logger.warning(
                    "surrogate collision allowed after %d redraws for cluster %s",
                    MAX_COLLISION_REDRAWS,
                    cluster.cluster_key,
                )
        self._surrogate_fulls.add(record.full.casefold())
        return record

    def _remember_surfaces(self, entry: LedgerEntry) -> None:
        if isinstance(entry.surrogate, SurrogateRecord):
            self._replacement_surfaces.add(entry.surrogate.full.casefold())
            self._replacement_surfaces.add(entry.surrogate.given.casefold())
        else:
            self._replacement_surfaces.add(entry.surrogate.casefold())

    def render(self, entry: LedgerEntry, span: EntitySpan) -> str:
        """Render the entry for one mention: name clusters get the full
        form for two-token spans and the given form otherwise; everything
        else returns the stored string verbatim."""
        if isinstance(entry.surrogate, SurrogateRecord):
            if entry.kind.is_name:
                rep_first = entry.original_representative.split()[0].casefold()
                span_first = span.surface.split()[0].casefold() if span.surface.split() else ""
                if span_first != rep_first:
                    raise LedgerIntegrityError(
                        f"span {span.surface!r} does not belong to cluster {entry.cluster_key!r}"
                    )
                if len(span.surface.split()) >= 2:
                    return entry.surrogate.full
                return entry.surrogate.given
            if f"{span.kind}:{span.normalized}" != entry.cluster_key:
                raise LedgerIntegrityError(
                    f"span {span.surface!r} does not belong to cluster {entry.cluster_key!r}"
                )
            return entry.surrogate.full
        if f"{span.kind}:{span.normalized}" != entry.cluster_key:
            raise LedgerIntegrityError(
                f"span {span.surface!r} does not belong to cluster {entry.cluster_key!r}"
            )
        return entry.surrogate

    def export(self, path: str | Path) -> int:
        """Write JSON lines in first-occurrence order; returns the count."""
        path = Path(path)
        try:
            with path.open("w", encoding="utf-8") as fh:
                for entry in self._entries.values():
                    fh.write(json.dumps(entry.to_dict(), sort_keys=True) + "\n")
        except OSError as exc:
            raise TableGuardError(f"ledger export to {path} failed: {exc}") from exc
        return len(self._entries)

    @classmethod
    def load(cls, path: str | Path) -> "Ledger":
        path = Path(path)
        ledger = cls()
        try:
            with path.open(encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    entry = LedgerEntry.from_dict(json.loads(line))
                    ledger._entries[entry.cluster_key] = entry
                    ledger._remember_surfaces(entry)
                    if isinstance(entry.surrogate, SurrogateRecord):
                        ledger._surrogate_fulls.add(entry.surrogate.full.casefold())
        except OSError as exc:
            raise TableGuardError(f"ledger import from {path} failed: {exc}") from exc
        return ledger


def _apply_mask(kind: EntityKind, surface: str, params: MaskParams) -> str:
    """Dispatch masking: default params select the kind-specific mask,
    explicit params select the generic keep-window mask."""
    if params.is_default:
        if kind.base == "phone_number":
            return strategies.mask_phone(surface)
        if kind.base == "credit_card_number":
            return strategies.mask_credit_card(surface)
        if kind.base == "email_address":
            return strategies.mask_email(surface)
        if kind.base == "street_address":
            return strategies.mask_house_number(surface)
        if kind.base == "alphanumeric_id":
            return strategies.mask_id(surface, 0, 0)
        return strategies.mask_text(surface)
    keep_prefix = params.keep_prefix or 0
    keep_suffix = params.keep_suffix or 0
    mask_char = params.mask_char or "X"
    if kind.base == "alphanumeric_id":
        return strategies.mask_id(surface, keep_prefix, keep_suffix, mask_char)
    preserve = True if params.preserve_separators is None else params.preserve_separators
    return strategies.mask_text(surface, keep_prefix, keep_suffix, mask_char, preserve)
