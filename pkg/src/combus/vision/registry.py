"""Face identification against a registry of known embeddings."""

import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from combus.audio.speaker_id import cosine
from combus.ekg.graph import INSTANCE_GRAPH, RDFS_LABEL
from combus.ekg.iri import Literal, XSD_INTEGER
from combus.vision.sidecar import EMBEDDING_DIM, SidecarInvalid, UNIT_TOLERANCE

MATCH_THRESHOLD = 0.85  # closed: a score of exactly 0.85 matches


class FaceRegistry:
    def __init__(self, faces: dict | None = None):
        self.faces = {}  # label -> {"iri": ..., "embedding": [...]}
        for label, entry in (faces or {}).items():
            self.add(label, entry["iri"], entry["embedding"])

    @classmethod
    def load(cls, path=None) -> "FaceRegistry":
        if path is None:
            with resources.files("combus.data.config").joinpath("face_registry.json").open() as f:
                return cls(json.load(f))
        return cls(json.loads(Path(path).read_text("utf-8")))

    def add(self, label: str, iri: str, embedding) -> None:
        embedding = [float(x) for x in embedding]
        if len(embedding) != EMBEDDING_DIM:
            raise SidecarInvalid(f"embedding dim {len(embedding)} != {EMBEDDING_DIM}")
        norm = math.sqrt(sum(x * x for x in embedding))
        if abs(norm - 1.0) > UNIT_TOLERANCE:
            raise SidecarInvalid(f"embedding for {label!r} not unit norm: {norm}")
        self.faces[label] = {"iri": iri, "embedding": embedding}

    def rename(self, old_label: str, new_label: str) -> None:
        if old_label in self.faces:
            self.faces[new_label] = self.faces.pop(old_label)


@dataclass(frozen=True)
class IdentityResult:
    label: str
    iri: str
    score: float
    new: bool  # True when a new identity was minted (NewIdentity)


def identify_face(face: dict, registry: FaceRegistry, ekg=None,
                  ids=None) -> IdentityResult:
    """Match a sidecar face against the registry, minting when unknown.

    Unknown faces become new identities carrying their inferred age and
    gender; the caller publishes the NewIdentity outcome so the Greeting
    intention can ask for the person's name.
    """
    embedding = face["embedding"]
    best = None
    for label, entry in sorted(registry.faces.items()):
        score = cosine(embedding, entry["embedding"])
        if best is None or score > best[2]:
            best = (label, entry["iri"], score)
    if best is not None and best[2] >= MATCH_THRESHOLD:
        return IdentityResult(best[0], best[1], best[2], new=False)

    suffix = ids.new_id()[-6:] if ids is not None else f"{len(registry.faces):06d}"
    label = f"stranger-{suffix}"
    iri = ekg.mint_instance(label, "person") if ekg else f"leolaniWorld:{label}"
    registry.add(label, iri, embedding)
    if ekg is not None:
        if face.get("age") is not None:
            ekg.store.add(iri, "n2mu:age", Literal(str(int(face["age"])), XSD_INTEGER),
                          INSTANCE_GRAPH)
        if face.get("gender"):
            ekg.store.add(iri, "n2mu:gender", Literal(str(face["gender"])),
                          INSTANCE_GRAPH)
    return IdentityResult(label, iri, 0.0 if best is None else best[2], new=True)


def rename_identity(iri: str, name: str, ekg, registry: FaceRegistry | None = None,
                    old_label: str | None = None) -> None:
    """A name learned in dialog rebinds the minted IRI's label."""
    ekg.store.add(iri, RDFS_LABEL, Literal(name), INSTANCE_GRAPH)
    if registry is not None and old_label is not None:
        registry.rename(old_label, name)
