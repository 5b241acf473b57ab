"""Name gazetteer: case-folded lookups and deterministic surrogate picks.

On-disk format is TSV with header ``name  part  gender  rank  era``; era is
optional ("-" means absent). Names are case-folded at load. A Gazetteer is
immutable after load and safe to share across threads.
"""

from __future__ import annotations

import bisect
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import InsufficientGazetteer, ParseError
from .stream import DeterministicStream

PARTS = ("first", "last")
GENDERS = ("male", "female", "unisex", "unknown")
_HEADER = "name\tpart\tgender\trank\tera"

GAZETTEER_ENV_VAR = "TABLEGUARD_GAZETTEER"


@dataclass(frozen=True)
class NameRecord:
    """One gazetteer entry; rank 1 is the most frequent name within its
    (part, gender) table."""

    name: str
    part: str
    gender: str
    rank: int
    era_bucket: str | None = None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "part": self.part,
            "gender": self.gender,
            "rank": self.rank,
            "era_bucket": self.era_bucket,
        }

    @classmethod
    def from_dict(cls, d) -> "NameRecord":
        return cls(d["name"], d["part"], d["gender"], int(d["rank"]), d.get("era_bucket"))


class Gazetteer:
    """Immutable index over name records.

    Lookups are O(1) case-folded exact matches; surrogate picks use
    rank-sorted pools per (part, gender, era) so rank-band queries are
    O(log n) plus the band width.
    """

    def __init__(self, records: list[NameRecord]):
        self._by_part: dict[str, dict[str, NameRecord]] = {p: {} for p in PARTS}
        for rec in records:
            self._by_part[rec.part][rec.name] = rec

        # pools[(part, gender-or-None, era-or-None)] -> (ranks, records),
        # records sorted by (rank, name) for a deterministic total order.
        self._pools: dict[tuple, tuple[list[int], list[NameRecord]]] = {}
        buckets: dict[tuple, list[NameRecord]] = {}
        for rec in records:
            eras = {None, rec.era_bucket} if rec.era_bucket else {None}
            for gender in (None, rec.gender):
                for era in eras:
                    buckets.setdefault((rec.part, gender, era), []).append(rec)
        for key, recs in buckets.items():
            recs.sort(key=lambda r: (r.rank, r.name))
            self._pools[key] = ([r.rank for r in recs], recs)

    def __len__(self) -> int:
        return sum(len(t) for t in self._by_part.values())

    def lookup(self, token: str, part: str) -> NameRecord | None:
        return self._by_part[part].get(token.casefold())

    def lookup_name(self, token: str) -> NameRecord | None:
        """Case-insensitive exact match; the first-name table wins."""
        folded = token.casefold()
        return self._by_part["first"].get(folded) or self._by_part["last"].get(folded)

    def records(self, part: str) -> tuple[NameRecord, ...]:
        _, recs = self._pools.get((part, None, None), ([], []))
        return tuple(recs)

    def _pool(self, part: str, gender: str | None, era: str | None):
        return self._pools.get((part, gender, era), ([], []))

    def pick_surrogate(
        self, original: NameRecord, params, stream: DeterministicStream
    ) -> NameRecord:
        """Deterministically pick a replacement name.

        The candidate pool is the original's (part, gender) table when
        gender matching is on and the gender is known, the whole part
        otherwise. With era awareness the pool narrows to records sharing
        the original's era bucket when that leaves at least one candidate.
        Candidates within rank_band_width of the original's rank are
        preferred; an empty band falls back to the nearest-rank records.
        Never returns the original.
        """
        gender = (
            original.gender
            if params.gender_match and original.gender != "unknown"
            else None
        )
        ranks, recs = self._pool(original.part, gender, None)
        if len(recs) < 2:
            raise InsufficientGazetteer(
                f"need at least 2 {original.part}-name records"
                + (f" of gender {gender}" if gender else "")
            )
        if params.era_aware and original.era_bucket:
            era_ranks, era_recs = self._pool(original.part, gender, original.era_bucket)
            if any(r.name != original.name for r in era_recs):
                ranks, recs = era_ranks, era_recs

        lo = bisect.bisect_left(ranks, original.rank - params.rank_band_width)
        hi = bisect.bisect_right(ranks, original.rank + params.rank_band_width)
        window = [r for r in recs[lo:hi] if r.name != original.name]
        if not window:
            others = [r for r in recs if r.name != original.name]
            best = min(abs(r.rank - original.rank) for r in others)
            window = [r for r in others if abs(r.rank - original.rank) == best]
        return window[stream.randint(len(window))]

    def uniform_pick(
        self, part: str, stream: DeterministicStream, exclude: str | None = None
    ) -> NameRecord:
        """Uniform draw over a whole part table, excluding one name."""
        _, recs = self._pool(part, None, None)
        candidates = [r for r in recs if r.name != exclude] if exclude else recs
        if len(candidates) < 1 or len(recs) < 2:
            raise InsufficientGazetteer(f"need at least 2 {part}-name records")
        return candidates[stream.randint(len(candidates))]


def load_gazetteer(path: str | Path) -> Gazetteer:
    """Parse a gazetteer TSV; malformed lines and duplicate (name, part)
    pairs are reported with their 1-based line number."""
    path = Path(path)
    records: list[NameRecord] = []
    seen_names: dict[tuple[str, str], int] = {}
    seen_ranks: dict[tuple[str, str, int], int] = {}
    with path.open(encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != _HEADER:
            raise ParseError(f"bad header {header!r}", path=path, line=1)
        for lineno, raw in enumerate(fh, start=2):
            line = raw.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 5:
                raise ParseError(f"expected 5 fields, got {len(fields)}", path=path, line=lineno)
            name, part, gender, rank_text, era = fields
            name = name.strip().casefold()
            if not name:
                raise ParseError("empty name", path=path, line=lineno)
            if part not in PARTS:
                raise ParseError(f"bad part {part!r}", path=path, line=lineno)
            if gender not in GENDERS:
                raise ParseError(f"bad gender {gender!r}", path=path, line=lineno)
            try:
                rank = int(rank_text)
            except ValueError:
                raise ParseError(f"bad rank {rank_text!r}", path=path, line=lineno) from None
            if rank < 1:
                raise ParseError(f"rank must be positive, got {rank}", path=path, line=lineno)
            if (name, part) in seen_names:
                raise ParseError(
                    f"duplicate name {name!r} for part {part!r}"
                    f" (first seen on line {seen_names[(name, part)]})",
                    path=path,
                    line=lineno,
                )
            if (part, gender, rank) in seen_ranks:
                raise ParseError(
                    f"duplicate rank {rank} within ({part}, {gender})"
                    f" (first seen on line {seen_ranks[(part, gender, rank)]})",
                    path=path,
                    line=lineno,
                )
            seen_names[(name, part)] = lineno
            seen_ranks[(part, gender, rank)] = lineno
            era_bucket = era.strip() or None
            if era_bucket == "-":
                era_bucket = None
            records.append(NameRecord(name, part, gender, rank, era_bucket))
    return Gazetteer(records)


def bundled_gazetteer_path() -> Path:
    """Path of the desk-scale gazetteer shipped with the package; the
    TABLEGUARD_GAZETTEER environment variable overrides it."""
    override = os.environ.get(GAZETTEER_ENV_VAR)
    if override:
        return Path(override)
    return Path(str(resources.files("tableguard").joinpath("data", "gazetteer.tsv")))


def load_bundled_gazetteer() -> Gazetteer:
    return load_gazetteer(bundled_gazetteer_path())
