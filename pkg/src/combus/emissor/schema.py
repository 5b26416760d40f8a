"""JSON Schema validation for scenario files and vision sidecars."""

import json
from functools import lru_cache
from importlib.resources import files

import jsonschema
from referencing import Registry, Resource

SCHEMAS = ("scenario", "ruler", "signal", "mention", "annotation", "sidecar")


@lru_cache(maxsize=1)
def _registry():
    resources = []
    for name in SCHEMAS:
        text = files("combus.data.schema").joinpath(f"{name}.json").read_text("utf-8")
        resources.append(Resource.from_contents(json.loads(text)))
    return Registry().with_resources((r.id(), r) for r in resources)


def validate_json(kind: str, obj) -> list:
    """Validate obj against the named schema; returns violation dicts."""
    if kind not in SCHEMAS:
        raise ValueError(f"unknown schema {kind!r}")
    registry = _registry()
    validator = jsonschema.Draft202012Validator(
        registry.contents(f"combus:{kind}"), registry=registry)
    return [
        {"code": "schema", "detail": f"{kind}{_path(e)}: {e.message}"}
        for e in validator.iter_errors(obj)
    ]


def _path(error) -> str:
    return "".join(f"[{p!r}]" for p in error.absolute_path)
