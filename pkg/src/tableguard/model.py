"""Shared domain types: entity kinds, spans, clusters, policies, results.

Everything here is immutable after construction and free of I/O and
randomness. Span offsets are byte offsets into the UTF-8 encoding of the
source text, not character counts; format-preserving masks rely on that.
All types round-trip through JSON dicts with snake_case field names.
"""

from __future__ import annotations

import fnmatch
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Any, Mapping

from .errors import InvalidInput, InvalidParams

if TYPE_CHECKING:  # pragma: no cover
    from .ledger import Ledger

_BASE_KINDS = frozenset(
    {
        "person_name",
        "given_name_only",
        "street_address",
        "location",
        "phone_number",
        "credit_card_number",
        "email_address",
        "alphanumeric_id",
        "date_expression",
        "weekday_name",
        "numeric_value",
        "custom",
    }
)

# Overlap-conflict priority, strongest first. Used only to break exact ties
# (same span length, same confidence).
KIND_PRIORITY = {
    "credit_card_number": 0,
    "phone_number": 1,
    "email_address": 2,
    "alphanumeric_id": 3,
    "person_name": 4,
    "street_address": 5,
    "date_expression": 6,
    "weekday_name": 7,
    "location": 8,
    "given_name_only": 9,
    "numeric_value": 10,
    "custom": 11,
}


@dataclass(frozen=True)
class EntityKind:
    """A detectable category of PII, optionally refined by a tag.

    For alphanumeric ids the tag names the id scheme ("policy-number",
    "drivers-license", or a custom scheme); for custom kinds it is the
    label. All other kinds carry no tag.
    """

    base: str
    tag: str | None = None

    def __post_init__(self):
        if self.base not in _BASE_KINDS:
            raise InvalidParams(f"unknown entity kind {self.base!r}")
        if self.base == "custom" and not self.tag:
            raise InvalidParams("custom entity kinds need a non-empty label")
        if self.tag is not None and self.base not in ("alphanumeric_id", "custom"):
            raise InvalidParams(f"kind {self.base!r} does not take a tag")

    def __str__(self) -> str:
        return self.base if self.tag is None else f"{self.base}:{self.tag}"

    @classmethod
    def parse(cls, text: str) -> "EntityKind":
        base, _, tag = text.partition(":")
        return cls(base, tag or None)

    @property
    def is_name(self) -> bool:
        return self.base in ("person_name", "given_name_only")


PERSON_NAME = EntityKind("person_name")
GIVEN_NAME_ONLY = EntityKind("given_name_only")
STREET_ADDRESS = EntityKind("street_address")
LOCATION = EntityKind("location")
PHONE_NUMBER = EntityKind("phone_number")
CREDIT_CARD_NUMBER = EntityKind("credit_card_number")
EMAIL_ADDRESS = EntityKind("email_address")
DATE_EXPRESSION = EntityKind("date_expression")
WEEKDAY_NAME = EntityKind("weekday_name")
NUMERIC_VALUE = EntityKind("numeric_value")
POLICY_NUMBER_ID = EntityKind("alphanumeric_id", "policy-number")
DRIVERS_LICENSE_ID = EntityKind("alphanumeric_id", "drivers-license")


def custom_kind(label: str) -> EntityKind:
    return EntityKind("custom", label)


def normalize_value(kind: EntityKind, surface: str) -> str:
    """Canonical form used for cluster keys: digits only for numbers,
    whitespace-collapsed casefold for everything else."""
    if kind.base in ("phone_number", "credit_card_number"):
        return "".join(ch for ch in surface if ch.isdigit())
    if kind.base == "numeric_value":
        try:
            return repr(float(surface))
        except (TypeError, ValueError):
            pass
    return " ".join(surface.split()).casefold()


@dataclass(frozen=True)
class EntitySpan:
    """One detected PII occurrence: byte range, kind, and canonical value."""

    start: int
    end: int
    kind: EntityKind
    surface: str
    normalized: str
    confidence: float = 1.0

    def __post_init__(self):
        if not 0 <= self.start < self.end:
            raise InvalidInput(f"bad span range [{self.start}, {self.end})")
        if not 0.0 <= self.confidence <= 1.0:
            raise InvalidInput(f"confidence {self.confidence} outside [0, 1]")

    def sort_key(self) -> tuple:
        return (self.start, self.end, str(self.kind))

    def overlaps(self, other: "EntitySpan") -> bool:
        return self.start < other.end and other.start < self.end

    @property
    def byte_length(self) -> int:
        return self.end - self.start

    def to_dict(self) -> dict:
        return {
            "start": self.start,
            "end": self.end,
            "kind": str(self.kind),
            "surface": self.surface,
            "normalized": self.normalized,
            "confidence": self.confidence,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "EntitySpan":
        return cls(
            start=int(d["start"]),
            end=int(d["end"]),
            kind=EntityKind.parse(d["kind"]),
            surface=d["surface"],
            normalized=d["normalized"],
            confidence=float(d.get("confidence", 1.0)),
        )


def _compatible(kinds: set[str]) -> bool:
    if len(kinds) == 1:
        return True
    return kinds <= {"person_name", "given_name_only"}


@dataclass(frozen=True)
class EntityCluster:
    """Coreferent spans that share one surrogate identity.

    The cluster key is derived from the representative's normalized form,
    never from mention positions, so it is stable under mention order.
    """

    cluster_key: str
    kind: EntityKind
    members: tuple[EntitySpan, ...]
    attributes: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.members:
            raise InvalidInput("cluster has no members")
        if not _compatible({m.kind.base for m in self.members}):
            raise InvalidInput(f"incompatible member kinds in cluster {self.cluster_key!r}")

    @property
    def representative(self) -> EntitySpan:
        # Longest surface wins; ties go to the earliest mention.
        return max(self.members, key=lambda s: (len(s.surface.encode("utf-8")), -s.start))

    @classmethod
    def from_members(
        cls, members: tuple[EntitySpan, ...], attributes: Mapping[str, str] | None = None
    ) -> "EntityCluster":
        rep = max(members, key=lambda s: (len(s.surface.encode("utf-8")), -s.start))
        key = f"{rep.kind}:{rep.normalized}"
        return cls(key, rep.kind, tuple(members), dict(attributes or {}))

    def to_dict(self) -> dict:
        return {
            "cluster_key": self.cluster_key,
            "kind": str(self.kind),
            "members": [m.to_dict() for m in self.members],
            "attributes": dict(self.attributes),
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "EntityCluster":
        return cls(
            cluster_key=d["cluster_key"],
            kind=EntityKind.parse(d["kind"]),
            members=tuple(EntitySpan.from_dict(m) for m in d["members"]),
            attributes=dict(d.get("attributes", {})),
        )


@dataclass(frozen=True)
class SurrogateRecord:
    """Replacement identity for a name-like cluster: full and given forms."""

    full: str
    given: str

    def to_dict(self) -> dict:
        return {"full": self.full, "given": self.given}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "SurrogateRecord":
        return cls(full=d["full"], given=d["given"])


class StrategyKind(str, Enum):
    MASK = "mask"
    GAUSSIAN = "gaussian"
    LAPLACE = "laplace"
    SURROGATE = "surrogate"
    PASS = "pass"


@dataclass(frozen=True)
class MaskParams:
    """Masking parameters; all-None means "use the kind-specific mask".

    Explicit values switch to the generic keep-prefix/keep-suffix mask,
    which is the escape hatch for schemes the bespoke masks do not cover.
    """

    keep_prefix: int | None = None
    keep_suffix: int | None = None
    mask_char: str | None = None
    preserve_separators: bool | None = None

    def __post_init__(self):
        for name in ("keep_prefix", "keep_suffix"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise InvalidParams(f"{name} must be >= 0")
        if self.mask_char is not None and (
            len(self.mask_char) != 1 or not self.mask_char.isascii()
        ):
            raise InvalidParams("mask_char must be a single ASCII character")

    @property
    def is_default(self) -> bool:
        return (
            self.keep_prefix is None
            and self.keep_suffix is None
            and self.mask_char is None
            and self.preserve_separators is None
        )


@dataclass(frozen=True)
class GaussianParams:
    sigma: float

    def __post_init__(self):
        if not self.sigma >= 0:
            raise InvalidParams("sigma must be >= 0")


@dataclass(frozen=True)
class LaplaceParams:
    epsilon: float
    sensitivity: float = 1.0

    def __post_init__(self):
        if not self.epsilon > 0:
            raise InvalidParams("epsilon must be > 0")
        if not self.sensitivity > 0:
            raise InvalidParams("sensitivity must be > 0")


@dataclass(frozen=True)
class SurrogateParams:
    rank_band_width: int = 100
    era_aware: bool = False
    gender_match: bool = True

    def __post_init__(self):
        if self.rank_band_width < 0:
            raise InvalidParams("rank_band_width must be >= 0")


StrategyParams = MaskParams | GaussianParams | LaplaceParams | SurrogateParams | None

_PARAMS_FOR_STRATEGY = {
    StrategyKind.MASK: MaskParams,
    StrategyKind.GAUSSIAN: GaussianParams,
    StrategyKind.LAPLACE: LaplaceParams,
    StrategyKind.SURROGATE: SurrogateParams,
    StrategyKind.PASS: type(None),
}


def _params_to_dict(params: StrategyParams) -> dict:
    if params is None:
        return {}
    d = {}
    for k, v in vars(params).items():
        if v is not None:
            d[k] = v
    return d


def _params_from_dict(strategy: StrategyKind, d: Mapping[str, Any]) -> StrategyParams:
    cls = _PARAMS_FOR_STRATEGY[strategy]
    if cls is type(None):
        return None
    return cls(**dict(d))


@dataclass(frozen=True)
class PolicyRule:
    """First-match-wins rule: one selector (entity kind or column pattern)
    mapped to a strategy with parameters."""

    strategy: StrategyKind
    kind: EntityKind | None = None
    column: str | None = None
    params: StrategyParams = None

    def __post_init__(self):
        if (self.kind is None) == (self.column is None):
            raise InvalidParams("rule needs exactly one selector: kind or column")
        expected = _PARAMS_FOR_STRATEGY[self.strategy]
        if self.params is None and expected is not type(None):
            object.__setattr__(self, "params", self._default_params())
        if not isinstance(self.params, expected):
            raise InvalidParams(
                f"strategy {self.strategy.value} takes {expected.__name__} parameters"
            )

    def _default_params(self) -> StrategyParams:
        cls = _PARAMS_FOR_STRATEGY[self.strategy]
        if cls is GaussianParams:
            raise InvalidParams("gaussian strategy requires sigma")
        if cls is LaplaceParams:
            raise InvalidParams("laplace strategy requires epsilon")
        return cls()

    def matches(self, kind: EntityKind | None, column: str | None) -> bool:
        if self.column is not None:
            return column is not None and fnmatch.fnmatchcase(column, self.column)
        assert self.kind is not None
        if kind is None or kind.base != self.kind.base:
            return False
        return self.kind.tag is None or self.kind.tag == kind.tag

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"strategy": self.strategy.value}
        if self.kind is not None:
            d["kind"] = self.kind.base
            if self.kind.tag is not None:
                d["tag"] = self.kind.tag
        if self.column is not None:
            d["column"] = self.column
        params = _params_to_dict(self.params)
        if params:
            d["params"] = params
        return d

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "PolicyRule":
        strategy = StrategyKind(d["strategy"])
        kind = None
        if "kind" in d:
            kind = EntityKind(d["kind"], d.get("tag"))
        params = _params_from_dict(strategy, d.get("params", {})) if "params" in d else None
        return cls(strategy=strategy, kind=kind, column=d.get("column"), params=params)


_SEED_MAX = (1 << 64) - 1


@dataclass(frozen=True)
class Policy:
    """Declarative obfuscation policy. The seed is explicit: there is no
    ambient randomness anywhere in the engine."""

    rules: tuple[PolicyRule, ...]
    seed: int
    default_action: str = "pass"
    recognizer: str = "builtin"

    def __post_init__(self):
        if isinstance(self.rules, list):
            object.__setattr__(self, "rules", tuple(self.rules))
        if not 0 <= self.seed <= _SEED_MAX:
            raise InvalidParams("seed must fit in an unsigned 64-bit integer")
        if self.default_action not in ("pass", "reject"):
            raise InvalidParams("default_action must be 'pass' or 'reject'")
        if self.recognizer != "builtin" and not self.recognizer.startswith("external:"):
            raise InvalidParams("recognizer must be 'builtin' or 'external:<command>'")
        labels = [
            r.kind.tag for r in self.rules if r.kind is not None and r.kind.base == "custom"
        ]
        if len(labels) != len(set(labels)):
            raise InvalidParams("custom kind labels must be unique within a policy")

    def match(self, kind: EntityKind | None = None, column: str | None = None) -> PolicyRule | None:
        for rule in self.rules:
            if rule.matches(kind, column):
                return rule
        return None

    def covers(self, kind: EntityKind, column: str | None = None) -> bool:
        """True when the kind resolves to a replacing (non-pass) rule."""
        rule = self.match(kind=kind, column=column)
        return rule is not None and rule.strategy is not StrategyKind.PASS

    def with_seed(self, seed: int) -> "Policy":
        return Policy(self.rules, seed, self.default_action, self.recognizer)

    def to_dict(self, include_seed: bool = True) -> dict:
        d: dict[str, Any] = {
            "rules": [r.to_dict() for r in self.rules],
            "default_action": self.default_action,
            "recognizer": self.recognizer,
        }
        if include_seed:
            d["seed"] = self.seed
        return d

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "Policy":
        return cls(
            rules=tuple(PolicyRule.from_dict(r) for r in d.get("rules", [])),
            seed=int(d["seed"]),
            default_action=d.get("default_action", "pass"),
            recognizer=d.get("recognizer", "builtin"),
        )


@dataclass(frozen=True)
class Replacement:
    """One rewrite: a span in original coordinates and its replacement."""

    span: EntitySpan
    replacement: str
    strategy: StrategyKind

    def to_dict(self) -> dict:
        return {
            "span": self.span.to_dict(),
            "replacement": self.replacement,
            "strategy": self.strategy.value,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "Replacement":
        return cls(
            span=EntitySpan.from_dict(d["span"]),
            replacement=d["replacement"],
            strategy=StrategyKind(d["strategy"]),
        )


@dataclass(frozen=True)
class ObfuscationResult:
    """Rewritten document plus the evidence trail.

    Bytes of `text` outside all replacement target ranges are identical to
    the input bytes; replacements never overlap in original coordinates.
    """

    text: str
    replacements: tuple[Replacement, ...]
    residual_scan: tuple[EntitySpan, ...]
    ledger: "Ledger | None" = None

    def __post_init__(self):
        ordered = sorted(self.replacements, key=lambda r: r.span.start)
        for a, b in zip(ordered, ordered[1:]):
            if a.span.overlaps(b.span):
                raise InvalidInput("replacements overlap in original coordinates")

    def to_dict(self) -> dict:
        d: dict[str, Any] = {
            "text": self.text,
            "replacements": [r.to_dict() for r in self.replacements],
            "residual_scan": [s.to_dict() for s in self.residual_scan],
        }
        if self.ledger is not None:
            d["ledger"] = [e.to_dict() for e in self.ledger.entries()]
        return d
