"""Canonical JSON: sorted keys, no insignificant whitespace, shortest
round-trip float form. Byte-equality of documents is part of the API
contract, so every response body funnels through here."""

from __future__ import annotations

import json
from enum import Enum

import numpy as np

__all__ = ["canonical_json", "plainify"]


def plainify(value):
    """Reduce a document to plain JSON types (tuples/sets/numpy -> lists etc.)."""
    if isinstance(value, dict):
        return {str(k): plainify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [plainify(v) for v in items]
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return [plainify(v) for v in value.tolist()]
    return value


def canonical_json(document) -> bytes:
    return json.dumps(
        plainify(document),
        sort_keys=True,
        separators=(",", ":"),
        allow_nan=False,
        ensure_ascii=False,
    ).encode("utf-8")
