"""Access to the JSON schemas shipped in ``oscibath/schemas``."""

import json
from importlib import resources

SCHEMA_NAMES = ("spectrum", "amplitude", "reports", "table1", "config")


def load_schema(name):
    """Return the parsed schema ``name`` (one of ``SCHEMA_NAMES``)."""
    if name not in SCHEMA_NAMES:
        raise KeyError(f"unknown schema {name!r}; choose from {SCHEMA_NAMES}")
    text = resources.files("oscibath").joinpath("schemas", f"{name}.schema.json").read_text(encoding="utf-8")
    return json.loads(text)
