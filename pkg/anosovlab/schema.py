"""JSON Schema documents describing the reports, and their validation."""

import copy
import json
from functools import lru_cache
from pathlib import Path
from typing import Dict

from deepmerge import always_merger
from jsonschema import Draft202012Validator
from referencing import Registry
from referencing.jsonschema import DRAFT202012

from anosovlab import settings
from anosovlab.errors import InvalidInputError

REPORT_KINDS = ("orbits", "reversible", "surgery", "loops", "propb")


def load_schemas(schema_dir: Path = settings.SCHEMA_DIR) -> Dict[str, dict]:
    """Read every ``*.json`` schema of ``schema_dir``, keyed by file stem."""
    return {path.stem: json.loads(path.read_text()) for path in sorted(Path(schema_dir).glob("*.json"))}


def build_registry(schemas: Dict[str, dict]) -> Registry:
    """
    Register every schema under its ``$id`` so relative ``$ref``s between the
    files resolve without touching the network.

    Args:
        schemas (Dict[str, dict]): Schema documents, each with a ``$id``.

    Returns:
        Registry: A registry holding one 2020-12 resource per document.
    """

    return Registry().with_resources(
        (schema["$id"], DRAFT202012.create_resource(schema)) for schema in schemas.values()
    )


@lru_cache(maxsize=None)
def _load(schema_dir: Path) -> tuple:
    schemas = load_schemas(schema_dir)
    return schemas, build_registry(schemas)


def get_schema(kind: str, schema_dir: Path = settings.SCHEMA_DIR) -> dict:
    schemas, _ = _load(Path(schema_dir))
    if kind == "common" or kind not in schemas:
        raise InvalidInputError(f"unknown report kind {kind!r}: expected one of {', '.join(REPORT_KINDS)}")
    return schemas[kind]


def validate_report(report: dict, kind: str):
    """
    Validate a report against its packaged schema.

    Raises:
        jsonschema.ValidationError: The report does not match; this is a bug
            in the report builder, not an input error.
    """

    _, registry = _load(settings.SCHEMA_DIR)
    Draft202012Validator(get_schema(kind), registry=registry).validate(report)


def recursive_resolve(kind: str, schema_dir: Path = settings.SCHEMA_DIR) -> dict:
    """Resolves all references in a report schema and merges them into a complete schema object.

    Every ``{"$ref": ...}`` node is replaced by the referenced schema, with
    the node's own keywords merged on top; the ``$defs`` of the top-level
    document are dropped once nothing points at them.

    Args:
        kind (str): The report kind, e.g. ``"orbits"``.
        schema_dir (Path): Directory holding the schema documents.

    Returns:
        dict: The resolved complete schema object.

    Example:
        >>> "$ref" in json.dumps(recursive_resolve("orbits"))
        False
    """

    _, registry = _load(Path(schema_dir))
    schema = copy.deepcopy(get_schema(kind, schema_dir))
    resolver = registry.resolver(base_uri=schema["$id"])
    resolved = _resolve_refs(schema, resolver)
    resolved.pop("$defs", None)
    return resolved


def _resolve_refs(subschema, resolver):
    if isinstance(subschema, list):
        return [_resolve_refs(item, resolver) for item in subschema]
    if not isinstance(subschema, dict):
        return subschema

    node = dict(subschema)
    ref = node.pop("$ref", None)
    node = {key: _resolve_refs(value, resolver) for key, value in node.items()}
    if ref is None:
        return node
    target = resolver.lookup(ref)
    inlined = _resolve_refs(copy.deepcopy(target.contents), target.resolver)
    inlined.pop("$id", None)
    inlined.pop("$defs", None)
    # keywords written next to the $ref take precedence
    return always_merger.merge(inlined, node)
