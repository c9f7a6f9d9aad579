"""Machine-readable tool manifest: the contract an external LLM (or any
client) uses to drive the analytics/DSP API. The manifest embeds the JSON
meta-schema it itself validates against."""

from __future__ import annotations

from .registry import TOOLS

MANIFEST_VERSION = 1

_PARAM_SCHEMA = {
    "type": "object",
    "required": ["name", "type", "description", "required", "location"],
    "properties": {
        "name": {"type": "string"},
        "type": {
            "type": "string",
            "enum": [
                "integer", "number", "string", "enum",
                "datetime", "hours", "bbox", "devices",
            ],
        },
        "description": {"type": "string"},
        "required": {"type": "boolean"},
        "location": {"type": "string", "enum": ["query", "path"]},
        "default": {},
        "minimum": {"type": "number"},
        "maximum": {"type": "number"},
        "enum": {"type": "array", "items": {"type": "string"}},
    },
    "additionalProperties": False,
}

META_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["version", "tools", "meta_schema"],
    "properties": {
        "version": {"type": "integer"},
        "meta_schema": {"type": "object"},
        "tools": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "description", "endpoint", "method", "params", "result"],
                "properties": {
                    "name": {"type": "string"},
                    "description": {"type": "string"},
                    "endpoint": {"type": "string", "pattern": "^/api/"},
                    "method": {"type": "string", "enum": ["GET"]},
                    "params": {"type": "array", "items": _PARAM_SCHEMA},
                    "result": {"type": "object"},
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}


def build_manifest() -> dict:
    return {
        "version": MANIFEST_VERSION,
        "meta_schema": META_SCHEMA,
        "tools": [TOOLS[name].to_document() for name in sorted(TOOLS)],
    }
