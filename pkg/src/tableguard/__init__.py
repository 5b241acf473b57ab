"""Deterministic, policy-driven PII obfuscation for documents and tables."""

from .engine import information_entropy, load_policy, obfuscate_document
from .errors import (
    FormatMismatch,
    InsufficientGazetteer,
    InvalidInput,
    InvalidParams,
    LedgerIntegrityError,
    ParseError,
    PolicyGap,
    TableGuardError,
)
from .gazetteer import Gazetteer, NameRecord, load_bundled_gazetteer, load_gazetteer
from .ledger import Ledger, LedgerEntry
from .model import (
    EntityCluster,
    EntityKind,
    EntitySpan,
    ObfuscationResult,
    Policy,
    PolicyRule,
    StrategyKind,
    SurrogateRecord,
)
from .recognize import RecognizerConfig, recognize
from .service import TableGuardService, serve
from .stream import DeterministicStream
from .tabular import (
    ColumnSpec,
    DataDictionary,
    TableData,
    k_anonymity,
    load_dictionary,
    load_table,
    obfuscate_table,
    utility_report,
    write_table,
)

__version__ = "0.1.0"
