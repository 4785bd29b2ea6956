"""Canonical schema, validation, edits and persistence for concept maps."""

from ctt.mapstore.validate import Violation, validate
from ctt.mapstore.canonical import (
    SCHEMA_VERSION,
    from_canonical_json,
    map_hash,
    to_canonical_json,
)
from ctt.mapstore.edits import EditOp, EditOpType, StoredMap, apply_edit
from ctt.mapstore.store import MapStore

__all__ = [
    "EditOp",
    "EditOpType",
    "MapStore",
    "SCHEMA_VERSION",
    "StoredMap",
    "Violation",
    "apply_edit",
    "from_canonical_json",
    "map_hash",
    "to_canonical_json",
    "validate",
]
