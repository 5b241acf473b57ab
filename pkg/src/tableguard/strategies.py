"""Obfuscation transformations: format-preserving masks, noise mechanisms,
and contextual surrogate generation.

Masks are byte-length preserving and only accept ASCII surfaces; a
non-ASCII byte inside a span is an error, never a silent mis-measure.
Masked output re-masks to itself (digit positions may already hold the
mask character), so masking is idempotent. Noise draws consume a fixed
number of uniforms per call, which keeps keyed streams aligned and makes
every draw bitwise reproducible.
"""

from __future__ import annotations

import math
import re
from dataclasses import replace

from .errors import FormatMismatch, InvalidInput, InvalidParams
from .gazetteer import Gazetteer, NameRecord
from .model import EntityCluster, SurrogateParams, SurrogateRecord
from .stream import DeterministicStream

# Digit positions may hold "X" when re-masking already-masked values.
_PHONE_SHAPES = (
    re.compile(r"\([0-9X]{3}\) [0-9X]{3}-[0-9X]{4}\Z"),
    re.compile(r"[0-9X]{3}\.[0-9X]{3}\.[0-9X]{4}\Z"),
    re.compile(r"[0-9X]{3}-[0-9X]{3}-[0-9X]{4}\Z"),
)
_CC_SHAPE = re.compile(r"(?:[0-9X]{16}|[0-9X]{4}([ -])[0-9X]{4}\1[0-9X]{4}\1[0-9X]{4})\Z")
_CC_KEEP = frozenset({1, 4, 13, 14, 15, 16})
_EMAIL_SHAPE = re.compile(r"([A-Za-z0-9._%+-]+)@([A-Za-z0-9.-]+)\.([A-Za-z]{2,})\Z")
_LEADING_DIGITS = re.compile(r"[0-9X]+")

WEEKDAYS = ("monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday")


def _digitish(ch: str) -> bool:
    return ch.isdigit() or ch == "X"


def mask_phone(surface: str) -> str:
    """Keep the area code (first three digits), mask every other digit
    with 'X', and leave punctuation bytes in place."""
    if not surface.isascii() or not any(p.match(surface) for p in _PHONE_SHAPES):
        raise FormatMismatch(f"not a maskable phone number: {surface!r}")
    out = []
    seen = 0
    for ch in surface:
        if _digitish(ch):
            out.append(ch if seen < 3 else "X")
            seen += 1
        else:
            out.append(ch)
    return "".join(out)


def mask_credit_card(surface: str) -> str:
    """Keep digits 1, 4, and 13-16 (1-based, counting digits only), mask
    the rest, and preserve separators."""
    if not surface.isascii() or not _CC_SHAPE.match(surface):
        raise FormatMismatch(f"not a maskable card number: {surface!r}")
    out = []
    pos = 0
    for ch in surface:
        if _digitish(ch):
            pos += 1
            out.append(ch if pos in _CC_KEEP else "X")
        else:
            out.append(ch)
    return "".join(out)


def mask_email(surface: str) -> str:
    """Mask the local part and every domain label except the final TLD
    with lowercase 'x'; '@' and '.' stay in place."""
    m = _EMAIL_SHAPE.match(surface) if surface.isascii() else None
    if m is None:
        raise FormatMismatch(f"not a maskable email address: {surface!r}")
    local, domain, tld = m.groups()
    labels = ".".join("x" * len(label) for label in domain.split("."))
    return f"{'x' * len(local)}@{labels}.{tld}"


def mask_id(surface: str, keep_prefix: int, keep_suffix: int, mask_char: str = "X") -> str:
    """Keep the first keep_prefix and last keep_suffix bytes of an ASCII
    alphanumeric token and mask the middle."""
    if not (surface.isascii() and surface.isalnum()):
        raise FormatMismatch(f"id surface must be ASCII alphanumeric: {surface!r}")
    if len(mask_char) != 1 or not mask_char.isascii():
        raise InvalidParams("mask_char must be a single ASCII character")
    if keep_prefix < 0 or keep_suffix < 0 or keep_prefix + keep_suffix >= len(surface):
        raise InvalidParams(
            f"keep windows ({keep_prefix}+{keep_suffix}) must leave at least one byte"
            f" of {len(surface)} to mask"
        )
    middle = mask_char * (len(surface) - keep_prefix - keep_suffix)
    suffix = surface[len(surface) - keep_suffix:] if keep_suffix else ""
    return surface[:keep_prefix] + middle + suffix


def mask_house_number(surface: str) -> str:
    """Mask the leading digit run of an address; the rest stays verbatim."""
    if not surface.isascii():
        raise FormatMismatch(f"address surface must be ASCII: {surface!r}")
    m = _LEADING_DIGITS.match(surface)
    if m is None:
        raise FormatMismatch(f"address has no leading house number: {surface!r}")
    return "X" * (m.end() - m.start()) + surface[m.end():]


def mask_text(
    surface: str,
    keep_prefix: int = 0,
    keep_suffix: int = 0,
    mask_char: str = "X",
    preserve_separators: bool = True,
) -> str:
    """Generic keep-prefix/keep-suffix mask for kinds without a bespoke
    format; with preserve_separators, non-alphanumeric bytes stay."""
    if not surface.isascii():
        raise FormatMismatch(f"maskable surface must be ASCII: {surface!r}")
    if len(mask_char) != 1 or not mask_char.isascii():
        raise InvalidParams("mask_char must be a single ASCII character")
    if keep_prefix < 0 or keep_suffix < 0 or keep_prefix + keep_suffix >= len(surface):
        raise InvalidParams(
            f"keep windows ({keep_prefix}+{keep_suffix}) must leave at least one byte"
            f" of {len(surface)} to mask"
        )
    out = []
    for i, ch in enumerate(surface):
        if i < keep_prefix or i >= len(surface) - keep_suffix:
            out.append(ch)
        elif preserve_separators and not ch.isalnum() and ch != mask_char:
            out.append(ch)
        else:
            out.append(mask_char)
    return "".join(out)


def perturb_gaussian(value: float, sigma: float, stream: DeterministicStream) -> float:
    """value + z * sigma with z standard normal; consumes two uniforms."""
    if not math.isfinite(value):
        raise InvalidInput(f"cannot perturb non-finite value {value!r}")
    if not sigma >= 0:
        raise InvalidParams("sigma must be >= 0")
    return value + stream.gauss() * sigma


def dp_laplace(
    value: float, epsilon: float, sensitivity: float, stream: DeterministicStream
) -> float:
    """Laplace mechanism: value + Laplace(scale=sensitivity/epsilon),
    drawn by inverse CDF from one uniform."""
    if not math.isfinite(value):
        raise InvalidInput(f"cannot perturb non-finite value {value!r}")
    if not epsilon > 0:
        raise InvalidParams("epsilon must be > 0")
    if not sensitivity > 0:
        raise InvalidParams("sensitivity must be > 0")
    return value + stream.laplace(sensitivity / epsilon)


def _mirror_case(original: str, name: str) -> str:
    if original.isupper() and len(original) > 1:
        return name.upper()
    if original[:1].isupper():
        return name.capitalize()
    return name


def surrogate_person_name(
    cluster: EntityCluster,
    gazetteer: Gazetteer,
    params: SurrogateParams,
    stream: DeterministicStream,
) -> SurrogateRecord:
    """Pick a replacement identity for a name cluster.

    The given name comes from a gender- and rank-band-constrained pick on
    the first token's record; the family name from a band pick on the
    last-name table, or a uniform draw when the original family name is
    unknown. A row-derived era bucket in the cluster attributes overrides
    the gazetteer's bucket for the given name. Capitalization mirrors the
    original tokens.
    """
    if not cluster.kind.is_name:
        raise InvalidParams(f"surrogate names need a name-like cluster, got {cluster.kind}")
    rep = cluster.representative
    tokens = rep.surface.split()
    if not tokens:
        raise InvalidInput("cluster representative has no tokens")
    first_token = tokens[0]

    first_rec = gazetteer.lookup(first_token, "first")
    if first_rec is not None:
        era_hint = cluster.attributes.get("era_bucket")
        if era_hint:
            first_rec = replace(first_rec, era_bucket=era_hint)
        given_rec = gazetteer.pick_surrogate(first_rec, params, stream)
    else:
        given_rec = gazetteer.uniform_pick("first", stream, exclude=first_token.casefold())
    given = _mirror_case(first_token, given_rec.name)

    if len(tokens) < 2:
        return SurrogateRecord(full=given, given=given)

    last_token = tokens[-1]
    last_rec = gazetteer.lookup(last_token, "last")
    if last_rec is not None:
        family_rec = gazetteer.pick_surrogate(last_rec, params, stream)
    else:
        family_rec = gazetteer.uniform_pick("last", stream, exclude=last_token.casefold())
    family = _mirror_case(last_token, family_rec.name)
    return SurrogateRecord(full=f"{given} {family}", given=given)


def surrogate_weekday(surface: str, stream: DeterministicStream) -> str:
    """Uniform draw over the six other weekday names, case mirrored."""
    folded = surface.casefold()
    if folded not in WEEKDAYS:
        raise FormatMismatch(f"not a weekday name: {surface!r}")
    others = [d for d in WEEKDAYS if d != folded]
    pick = others[stream.randint(len(others))]
    if surface.isupper():
        return pick.upper()
    if surface.islower():
        return pick
    return pick.capitalize()
