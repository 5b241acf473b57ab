"""Read-only HTTP query service over an obfuscated table view.

The table is obfuscated once at load (a materialized view), before the
socket binds, so pagination is deterministic and the raw table never
crosses the serialization boundary. Responses for identical (offset,
limit) are byte-identical. The policy endpoint never discloses the seed.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

from .engine import information_entropy, load_policy
from .errors import InvalidInput, TableGuardError
from .gazetteer import Gazetteer, load_bundled_gazetteer
from .ledger import Ledger
from .model import Policy
from .tabular import TableData, k_anonymity, load_dictionary, load_table, obfuscate_table

logger = logging.getLogger(__name__)

DEFAULT_LIMIT = 100
MAX_LIMIT = 1000


@dataclass
class ObfuscatedView:
    rows: list[dict]
    ledger: Ledger
    policy: Policy
    metrics: dict


class TableGuardService:
    """Holds the materialized obfuscated view; None until load completes."""

    def __init__(self):
        self.view: ObfuscatedView | None = None

    def load(
        self,
        table_path,
        dictionary_path,
        policy_path,
        gazetteer: Gazetteer | None = None,
    ) -> None:
        gazetteer = gazetteer if gazetteer is not None else load_bundled_gazetteer()
        dictionary = load_dictionary(dictionary_path)
        policy = load_policy(policy_path)
        table = load_table(table_path, dictionary)
        obfuscated, ledger = obfuscate_table(table, policy, gazetteer)
        self.view = ObfuscatedView(
            rows=obfuscated.row_dicts(),
            ledger=ledger,
            policy=policy,
            metrics=_metrics_for(obfuscated),
        )

    def handle(self, path: str, query: dict[str, list[str]]) -> tuple[int, dict | list]:
        """Route one GET request; returns (status, JSON-serializable body)."""
        if self.view is None:
            return 503, {"status": "loading"}
        if path == "/v1/health":
            return 200, {"status": "ok"}
        if path == "/v1/rows":
            return self._rows(query)
        if path == "/v1/metrics":
            return 200, self.view.metrics
        if path == "/v1/policy":
            return 200, self.view.policy.to_dict(include_seed=False)
        return 404, {"error": "not found"}

    def _rows(self, query: dict[str, list[str]]) -> tuple[int, dict | list]:
        try:
            offset = int(query.get("offset", ["0"])[0])
            limit = int(query.get("limit", [str(DEFAULT_LIMIT)])[0])
        except ValueError:
            return 400, {"error": "offset and limit must be integers"}
        if offset < 0 or limit < 1 or limit > MAX_LIMIT:
            return 400, {"error": f"need offset >= 0 and 1 <= limit <= {MAX_LIMIT}"}
        return 200, self.view.rows[offset : offset + limit]


def _metrics_for(table: TableData) -> dict:
    qi_columns = table.dictionary.quasi_identifier_columns()
    k = None
    if qi_columns and table.rows:
        k = k_anonymity(table, qi_columns)
    entropy = {}
    for name in table.columns:
        values = ["" if v is None else str(v) for v in table.column_values(name)]
        entropy[name] = information_entropy(values) if values else None
    return {
        "rows": len(table.rows),
        "quasi_identifier_columns": qi_columns,
        "k_anonymity": k,
        "entropy_bits": entropy,
    }


class _Handler(BaseHTTPRequestHandler):
    service: TableGuardService  # set by make_server

    def do_GET(self):  # noqa: N802 - http.server API
        try:
            url = urlparse(self.path)
            status, body = self.service.handle(url.path, parse_qs(url.query))
        except Exception:
            # Never leak cell values through error bodies.
            logger.exception("request failed")
            status, body = 500, {"error": "internal error"}
        payload = json.dumps(body).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def log_message(self, format, *args):  # noqa: A002 - http.server API
        logger.debug("%s - %s", self.address_string(), format % args)


def make_server(service: TableGuardService, bind: str = "127.0.0.1:0") -> ThreadingHTTPServer:
    host, _, port_text = bind.rpartition(":")
    if not host or not port_text:
        raise InvalidInput(f"bind address must be host:port, got {bind!r}")
    handler = type("BoundHandler", (_Handler,), {"service": service})
    return ThreadingHTTPServer((host, int(port_text)), handler)


def serve(
    table_path,
    dictionary_path,
    policy_path,
    bind: str = "127.0.0.1:8470",
    gazetteer: Gazetteer | None = None,
) -> None:
    """Load everything (fail fast), then bind the socket and serve."""
    service = TableGuardService()
    service.load(table_path, dictionary_path, policy_path, gazetteer)
    server = make_server(service, bind)
    host, port = server.server_address[:2]
    logger.info("serving obfuscated rows on http://%s:%s", host, port)
    try:
        server.serve_forever()
    finally:
        server.server_close()
