"""Rule-based recognition: regex detectors plus gazetteer-backed name
detection, overlap resolution, and deterministic coreference clustering.

Recognition is a pure function of (text, gazetteer, config): repeated
calls return byte-identical results. Span offsets are byte offsets into
the UTF-8 encoding of the input. An external recognizer can replace the
built-in detectors through a JSON-over-stdio subprocess contract.
"""

from __future__ import annotations

import json
import re
import shlex
import subprocess
from dataclasses import dataclass

from .errors import InvalidInput
from .gazetteer import Gazetteer
from .model import (
    CREDIT_CARD_NUMBER,
    DATE_EXPRESSION,
    DRIVERS_LICENSE_ID,
    EMAIL_ADDRESS,
    GIVEN_NAME_ONLY,
    KIND_PRIORITY,
    PERSON_NAME,
    PHONE_NUMBER,
    POLICY_NUMBER_ID,
    STREET_ADDRESS,
    WEEKDAY_NAME,
    EntityCluster,
    EntityKind,
    EntitySpan,
    normalize_value,
)

_PHONE = re.compile(r"(?<!\d)(?:\(\d{3}\) \d{3}-\d{4}|\d{3}\.\d{3}\.\d{4}|\d{3}-\d{3}-\d{4})(?!\d)")
_CREDIT_CARD = re.compile(r"(?<!\d)\d{4}([ -]?)\d{4}\1\d{4}\1\d{4}(?!\d)")
_EMAIL = re.compile(r"\b[A-Za-z0-9._%+-]+@[A-Za-z0-9-]+(?:\.[A-Za-z0-9-]+)*\.[A-Za-z]{2,}\b")

# Id schemes are tried in order; the first pattern to claim a span keeps it.
_ID_PATTERNS = (
    (POLICY_NUMBER_ID, re.compile(r"\b[A-Z]{2}\d{8}\b")),
    (DRIVERS_LICENSE_ID, re.compile(r"\b[A-Z]{1,4}\d{6,8}\b")),
)

_MONTH = (
    r"(?:January|February|March|April|May|June|July|August|September|October|November|December)"
)
_DATE = re.compile(
    r"\b(?:\d{1,2}/\d{1,2}/\d{2,4}"
    rf"|{_MONTH}\s+\d{{1,2}}(?:,\s*\d{{2,4}})?"
    rf"|\d{{1,2}}\s+{_MONTH}(?:,?\s+\d{{2,4}})?"
    rf"|{_MONTH}\s+\d{{4}})\b"
)
_WEEKDAY = re.compile(
    r"\b(?:Monday|Tuesday|Wednesday|Thursday|Friday|Saturday|Sunday)\b", re.IGNORECASE
)

_STREET_SUFFIX = (
    r"(?:Street|Avenue|Boulevard|Road|Lane|Drive|Court|Place|Terrace|Circle|Highway|Way"
    r"|St|Ave|Blvd|Rd|Ln|Dr|Ct|Pl|Ter|Cir|Hwy)"
)
_CAP_SEQ = r"[A-Z][A-Za-z.'-]*(?:\s+[A-Z][A-Za-z.'-]*)*"
_ADDRESS = re.compile(
    r"\b\d{1,5}\s+"
    r"(?:[A-Za-z0-9][A-Za-z0-9'.-]*\s+){0,3}"
    rf"{_STREET_SUFFIX}\b\.?"
    rf"(?:,\s*{_CAP_SEQ}"
    rf"(?:,\s*(?:[A-Z]{{2}}\s+\d{{5}}(?:-\d{{4}})?|{_CAP_SEQ}))?)?"
)

_WORD = re.compile(r"[A-Za-z]+")

_PATTERN_DETECTORS = (
    (PHONE_NUMBER, _PHONE),
    (CREDIT_CARD_NUMBER, _CREDIT_CARD),
    (EMAIL_ADDRESS, _EMAIL),
    (DATE_EXPRESSION, _DATE),
    (WEEKDAY_NAME, _WEEKDAY),
    (STREET_ADDRESS, _ADDRESS),
)

CONFIDENCE_PATTERN = 1.0
CONFIDENCE_FULL_NAME = 0.9
CONFIDENCE_GIVEN_NAME = 0.6


@dataclass(frozen=True)
class RecognizerConfig:
    """Detector configuration; enabled_kinds of None means every kind."""

    enabled_kinds: frozenset[str] | None = None
    confidence_threshold: float = 0.5
    locale: str = "en-US"

    def __post_init__(self):
        if not 0.0 <= self.confidence_threshold <= 1.0:
            raise InvalidInput("confidence_threshold must be in [0, 1]")
        if self.enabled_kinds is not None and not isinstance(self.enabled_kinds, frozenset):
            object.__setattr__(self, "enabled_kinds", frozenset(self.enabled_kinds))

    def allows(self, kind: EntityKind) -> bool:
        return self.enabled_kinds is None or kind.base in self.enabled_kinds

    def to_dict(self) -> dict:
        return {
            "enabled_kinds": sorted(self.enabled_kinds) if self.enabled_kinds else None,
            "confidence_threshold": self.confidence_threshold,
            "locale": self.locale,
        }

    @classmethod
    def from_dict(cls, d) -> "RecognizerConfig":
        kinds = d.get("enabled_kinds")
        return cls(
            enabled_kinds=frozenset(kinds) if kinds else None,
            confidence_threshold=float(d.get("confidence_threshold", 0.5)),
            locale=d.get("locale", "en-US"),
        )


DEFAULT_CONFIG = RecognizerConfig()


def _byte_offsets(text: str) -> list[int] | None:
    """Char-index -> byte-offset map; None for pure ASCII (identity)."""
    if text.isascii():
        return None
    offsets = [0] * (len(text) + 1)
    total = 0
    for i, ch in enumerate(text):
        offsets[i] = total
        total += len(ch.encode("utf-8"))
    offsets[len(text)] = total
    return offsets


def _make_span(
    text: str,
    offsets: list[int] | None,
    char_start: int,
    char_end: int,
    kind: EntityKind,
    confidence: float,
) -> EntitySpan:
    surface = text[char_start:char_end]
    start = char_start if offsets is None else offsets[char_start]
    end = char_end if offsets is None else offsets[char_end]
    return EntitySpan(start, end, kind, surface, normalize_value(kind, surface), confidence)


def detect_pattern_entities(
    text: str, config: RecognizerConfig = DEFAULT_CONFIG
) -> list[EntitySpan]:
    """Run the regex detectors; pattern hits carry confidence 1.0."""
    if not text:
        return []
    offsets = _byte_offsets(text)
    spans: list[EntitySpan] = []
    for kind, pattern in _PATTERN_DETECTORS:
        if not config.allows(kind):
            continue
        for m in pattern.finditer(text):
            spans.append(_make_span(text, offsets, m.start(), m.end(), kind, CONFIDENCE_PATTERN))
    if config.allows(POLICY_NUMBER_ID):
        claimed: set[tuple[int, int]] = set()
        for kind, pattern in _ID_PATTERNS:
            for m in pattern.finditer(text):
                if (m.start(), m.end()) in claimed:
                    continue
                claimed.add((m.start(), m.end()))
                spans.append(
                    _make_span(text, offsets, m.start(), m.end(), kind, CONFIDENCE_PATTERN)
                )
    spans.sort(key=EntitySpan.sort_key)
    return spans


def _capitalized(token: str) -> bool:
    return token[0].isupper() and (len(token) == 1 or token[1:].islower())


def detect_name_entities(
    text: str, gazetteer: Gazetteer, config: RecognizerConfig = DEFAULT_CONFIG
) -> list[EntitySpan]:
    """Gazetteer-backed name detection.

    A capitalized token in the first-name table starts a mention. If the
    immediately following token (whitespace gap only) is capitalized and
    either hits the last-name table or is unknown to the gazetteer, the
    pair is a PersonName (confidence 0.9); otherwise the hit is a lone
    GivenNameOnly (confidence 0.6).
    """
    if not text:
        return []
    allow_person = config.allows(PERSON_NAME)
    allow_given = config.allows(GIVEN_NAME_ONLY)
    if not (allow_person or allow_given):
        return []
    offsets = _byte_offsets(text)
    tokens = [(m.start(), m.end(), m.group()) for m in _WORD.finditer(text)]
    spans: list[EntitySpan] = []
    i = 0
    while i < len(tokens):
        start, end, token = tokens[i]
        if not (_capitalized(token) and gazetteer.lookup(token, "first")):
            i += 1
            continue
        if allow_person and i + 1 < len(tokens):
            start2, end2, token2 = tokens[i + 1]
            gap = text[end:start2]
            if gap.isspace() and _capitalized(token2):
                in_last = gazetteer.lookup(token2, "last") is not None
                in_first = gazetteer.lookup(token2, "first") is not None
                if in_last or not in_first:
                    spans.append(
                        _make_span(text, offsets, start, end2, PERSON_NAME, CONFIDENCE_FULL_NAME)
                    )
                    i += 2
                    continue
        if allow_given:
            spans.append(
                _make_span(text, offsets, start, end, GIVEN_NAME_ONLY, CONFIDENCE_GIVEN_NAME)
            )
        i += 1
    return spans


def resolve_overlaps(spans: list[EntitySpan]) -> list[EntitySpan]:
    """Keep a non-overlapping subset: longer span wins, then higher
    confidence, then kind priority, then leftmost."""
    order = sorted(
        spans,
        key=lambda s: (
            -(s.end - s.start),
            -s.confidence,
            KIND_PRIORITY.get(s.kind.base, len(KIND_PRIORITY)),
            s.start,
            str(s.kind),
        ),
    )
    kept: list[EntitySpan] = []
    for span in order:
        if all(not span.overlaps(k) for k in kept):
            kept.append(span)
    kept.sort(key=EntitySpan.sort_key)
    return kept


def link_coreferences(text: str, spans: list[EntitySpan]) -> list[EntityCluster]:
    """Deterministic rule clustering over finalized spans.

    PersonName spans with one normalized full name share a cluster; a
    GivenNameOnly span joins the nearest preceding PersonName whose first
    token matches it; unmatched given names and every non-name kind key
    singleton clusters by normalized value, so repeats share a cluster.
    """
    members: dict[str, list[EntitySpan]] = {}
    persons: list[tuple[EntitySpan, str]] = []
    for span in spans:
        if span.kind.base == "person_name":
            key = f"{span.kind}:{span.normalized}"
            persons.append((span, key))
        elif span.kind.base == "given_name_only":
            key = None
            for person, person_key in reversed(persons):
                if person.end <= span.start and person.normalized.split()[0] == span.normalized:
                    key = person_key
                    break
            if key is None:
                key = f"{span.kind}:{span.normalized}"
        else:
            key = f"{span.kind}:{span.normalized}"
        members.setdefault(key, []).append(span)
    return [EntityCluster.from_members(tuple(group)) for group in members.values()]


def recognize(
    text: str, gazetteer: Gazetteer, config: RecognizerConfig = DEFAULT_CONFIG
) -> tuple[list[EntitySpan], list[EntityCluster]]:
    """Full built-in pipeline: detect, threshold, resolve overlaps, link."""
    spans = detect_pattern_entities(text, config) + detect_name_entities(text, gazetteer, config)
    spans = [s for s in spans if s.confidence >= config.confidence_threshold]
    spans = resolve_overlaps(spans)
    return spans, link_coreferences(text, spans)


def _external_detect(command: str, text: str, config: RecognizerConfig) -> list[EntitySpan]:
    """Invoke an external recognizer: JSON {text, config} on stdin, JSON
    {spans: [...]} on stdout, spans in the interchange format."""
    argv = shlex.split(command)
    payload = json.dumps({"text": text, "config": config.to_dict()})
    proc = subprocess.run(argv, input=payload, capture_output=True, text=True)
    if proc.returncode != 0:
        raise InvalidInput(
            f"external recognizer {argv[0]!r} failed with code {proc.returncode}:"
            f" {proc.stderr.strip()[:200]}"
        )
    try:
        raw = json.loads(proc.stdout)["spans"]
    except (json.JSONDecodeError, KeyError) as exc:
        raise InvalidInput(f"external recognizer returned malformed JSON: {exc}") from exc
    data = text.encode("utf-8")
    spans = []
    for item in raw:
        span = EntitySpan.from_dict(item)
        if data[span.start:span.end].decode("utf-8", errors="replace") != span.surface:
            raise InvalidInput(
                f"external span [{span.start}, {span.end}) does not match its surface"
            )
        spans.append(span)
    return spans


def recognize_with(
    recognizer: str,
    text: str,
    gazetteer: Gazetteer,
    config: RecognizerConfig = DEFAULT_CONFIG,
) -> tuple[list[EntitySpan], list[EntityCluster]]:
    """Run recognition through the configured recognizer plug-in; the
    downstream threshold/overlap/clustering stages are always applied."""
    if recognizer == "builtin":
        return recognize(text, gazetteer, config)
    if recognizer.startswith("external:"):
        spans = _external_detect(recognizer[len("external:"):], text, config)
        spans = [s for s in spans if s.confidence >= config.confidence_threshold]
        spans = resolve_overlaps(spans)
        return spans, link_coreferences(text, spans)
    raise InvalidInput(f"unknown recognizer {recognizer!r}")
