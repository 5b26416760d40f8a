"""Prefixed IRIs and literals for the quad store."""

import json
import re
from dataclasses import dataclass
from importlib import resources

XSD_STRING = "xsd:string"
XSD_INTEGER = "xsd:integer"
XSD_LONG = "xsd:long"
XSD_DOUBLE = "xsd:double"


class InvalidIri(Exception):
    pass


class UnboundPredicateNamespace(Exception):
    pass


def default_prefixes() -> dict:
    with resources.files("combus.data.config").joinpath("prefixes.json").open() as f:
        return json.load(f)


DEFAULT_PREFIXES = default_prefixes()

_LABEL_RE = re.compile(r"[^a-z0-9_-]+")


def sanitize_label(label: str) -> str:
    """Lowercase, collapse punctuation/whitespace to single dashes."""
    cleaned = _LABEL_RE.sub("-", label.strip().lower()).strip("-")
    return cleaned or "unnamed"


@dataclass(frozen=True)
class Literal:
    value: str
    datatype: str = XSD_STRING

    def sort_key(self):
        return ("literal", self.datatype, self.value)


class PrefixTable:
    def __init__(self, prefixes: dict | None = None):
        self.prefixes = dict(prefixes or DEFAULT_PREFIXES)
        self._by_namespace = sorted(
            self.prefixes.items(), key=lambda kv: -len(kv[1])
        )

    def check(self, iri: str) -> str:
        """Validate a prefixed or absolute IRI; returns it unchanged."""
        if not isinstance(iri, str) or not iri or any(c.isspace() for c in iri):
            raise InvalidIri(f"not an IRI: {iri!r}")
        if iri.startswith("http://") or iri.startswith("https://"):
            return iri
        prefix, sep, _ = iri.partition(":")
        if not sep or prefix not in self.prefixes:
            raise InvalidIri(f"unknown namespace prefix in {iri!r}")
        return iri

    def expand(self, iri: str) -> str:
        if iri.startswith("http://") or iri.startswith("https://"):
            return iri
        prefix, sep, local = iri.partition(":")
        if not sep or prefix not in self.prefixes:
            raise InvalidIri(f"unknown namespace prefix in {iri!r}")
        return self.prefixes[prefix] + local

    def compress(self, full: str) -> str:
        for prefix, namespace in self._by_namespace:
            if full.startswith(namespace):
                return f"{prefix}:{full[len(namespace):]}"
        return full
