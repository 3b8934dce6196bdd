"""JSON schemas for algebra files, search specs and ``--json`` reports.

Validation needs the optional ``jsonschema`` package; loading does not.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

NAMES = (
    "algebra-file",
    "search-spec",
    "check-report",
    "analyze-report",
    "twist-report",
    "detwist-report",
    "enumerate-twists-report",
    "search-report",
    "fixture-report",
    "error-report",
)

REPORT_FOR = {
    "check": "check-report",
    "analyze": "analyze-report",
    "twist": "twist-report",
    "detwist": "detwist-report",
    "enumerate-twists": "enumerate-twists-report",
    "search": "search-report",
    "fixture": "fixture-report",
}


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    if name not in NAMES:
        raise KeyError(f"unknown schema {name!r}")
    text = resources.files("homalg").joinpath("schema_data").joinpath(f"{name}.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def validate(doc, name: str) -> None:
    """Raise ``jsonschema.ValidationError`` if ``doc`` does not match schema ``name``."""
    import jsonschema
    from referencing import Registry, Resource

    registry = Registry().with_resources(
        (n, Resource.from_contents(load_schema(n))) for n in NAMES
    )
    jsonschema.Draft202012Validator(load_schema(name), registry=registry).validate(doc)


def validate_report(doc: dict) -> None:
    """Validate a ``--json`` report against the schema of its command (or the error schema)."""
    if set(doc) == {"command", "error", "message"}:
        validate(doc, "error-report")
    else:
        validate(doc, REPORT_FOR[doc["command"]])
