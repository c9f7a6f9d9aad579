"""HTTP service: FastAPI app factory, canonical JSON, and the tool registry."""

from .app import create_app
from .canonical import canonical_json, plainify
from .manifest import build_manifest
from .registry import TOOLS, ParamSpec, ToolSpec, parse_params

__all__ = [
    "TOOLS",
    "ParamSpec",
    "ToolSpec",
    "build_manifest",
    "canonical_json",
    "create_app",
    "parse_params",
    "plainify",
]
