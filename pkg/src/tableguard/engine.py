"""Document pipeline: recognize, cluster, assign surrogates, rewrite.

Rewriting walks replacements right-to-left over original byte offsets, so
earlier offsets stay valid and every byte outside a replaced range is
carried over untouched. The residual scan re-runs recognition on the
output and reports covered-kind spans that are not replacements this run
issued, which is what "PII still detectable" means once surrogates are in
the text.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from pathlib import Path
from typing import Iterable

from .errors import FormatMismatch, InvalidInput, InvalidParams, TableGuardError
from .gazetteer import Gazetteer
from .ledger import Ledger
from .model import EntityCluster, ObfuscationResult, Policy, Replacement, StrategyKind
from .recognize import DEFAULT_CONFIG, RecognizerConfig, recognize_with


def load_policy(path: str | Path) -> Policy:
    with Path(path).open(encoding="utf-8") as fh:
        return Policy.from_dict(json.load(fh))


def apply_clusters(
    text: str,
    clusters: Iterable[EntityCluster],
    policy: Policy,
    gazetteer: Gazetteer | None,
    ledger: Ledger,
    column: str | None = None,
    collision_retry: bool = True,
) -> tuple[str, tuple[Replacement, ...]]:
    """Assign every covered cluster and rewrite the text in one pass."""
    replacements: list[Replacement] = []
    for cluster in clusters:
        rep = cluster.representative
        try:
            entry = ledger.assign(
                cluster, policy, gazetteer, column=column, collision_retry=collision_retry
            )
        except (FormatMismatch, InvalidParams, InvalidInput) as exc:
            raise type(exc)(
                f"{exc} (kind {cluster.kind}, bytes {rep.start}:{rep.end})"
            ) from exc
        if entry is None:
            continue
        rule = policy.match(kind=cluster.kind, column=column)
        for span in cluster.members:
            replacements.append(Replacement(span, ledger.render(entry, span), rule.strategy))

    buf = bytearray(text.encode("utf-8"))
    for item in sorted(replacements, key=lambda r: r.span.start, reverse=True):
        buf[item.span.start : item.span.end] = item.replacement.encode("utf-8")
    replacements.sort(key=lambda r: r.span.start)
    return buf.decode("utf-8"), tuple(replacements)


def residual_scan(
    text: str,
    policy: Policy,
    gazetteer: Gazetteer,
    ledger: Ledger,
    config: RecognizerConfig = DEFAULT_CONFIG,
):
    """Detect covered-kind spans that survived obfuscation. Spans whose
    surface is a replacement this ledger issued are not residuals."""
    spans, _ = recognize_with(policy.recognizer, text, gazetteer, config)
    issued = ledger.replacement_surfaces()
    return tuple(
        s
        for s in spans
        if policy.covers(s.kind) and s.surface.casefold() not in issued
    )


def obfuscate_document(
    text: str,
    policy: Policy,
    gazetteer: Gazetteer,
    config: RecognizerConfig = DEFAULT_CONFIG,
    ledger: Ledger | None = None,
    collision_retry: bool = True,
) -> ObfuscationResult:
    """Obfuscate one document under the policy.

    Every finalized span whose kind resolves to a replacing rule is
    rewritten through the ledger; kinds without rules follow the policy's
    default action. The result carries the replacements, a residual scan
    of the output, and the ledger for export.
    """
    spans, clusters = recognize_with(policy.recognizer, text, gazetteer, config)
    ledger = Ledger() if ledger is None else ledger
    out_text, replacements = apply_clusters(
        text, clusters, policy, gazetteer, ledger, collision_retry=collision_retry
    )
    residuals = residual_scan(out_text, policy, gazetteer, ledger, config)
    return ObfuscationResult(out_text, replacements, residuals, ledger)


def information_entropy(values: list) -> float:
    """Shannon entropy (base 2) of the empirical value distribution."""
    if not values:
        raise InvalidInput("entropy needs a non-empty value list")
    n = len(values)
    counts = Counter(values)
    return -sum((c / n) * math.log2(c / n) for c in counts.values())
