from combus.ekg.iri import (
    DEFAULT_PREFIXES,
    InvalidIri,
    Literal,
    PrefixTable,
    UnboundPredicateNamespace,
    sanitize_label,
)
from combus.ekg.store import Quad, QuadStore
from combus.ekg.capsules import (
    ClaimCapsule,
    MalformedCapsule,
    PerceptionCapsule,
    Perspective,
)
from combus.ekg.thoughts import Thought
from combus.ekg.graph import EpisodicKnowledgeGraph, Ontology, UnknownContext
