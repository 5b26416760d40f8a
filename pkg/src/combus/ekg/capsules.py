"""Capsules: structured packets carrying one claim or perception into the graph."""

from dataclasses import dataclass, field


class MalformedCapsule(Exception):
    pass


EMOTIONS = {"joy", "sadness", "anger", "fear", "surprise", "neutral"}


@dataclass(frozen=True)
class Perspective:
    certainty: float = 0.9
    polarity: int = 1
    sentiment: float = 0.0
    emotion: str | None = None

    def __post_init__(self):
        if not 0.0 <= self.certainty <= 1.0:
            raise MalformedCapsule(f"certainty out of range: {self.certainty}")
        if self.polarity not in (-1, 1):
            raise MalformedCapsule(f"polarity must be -1 or +1: {self.polarity}")
        if not -1.0 <= self.sentiment <= 1.0:
            raise MalformedCapsule(f"sentiment out of range: {self.sentiment}")
        if self.emotion is not None and self.emotion not in EMOTIONS:
            raise MalformedCapsule(f"unknown emotion: {self.emotion}")

    def to_dict(self) -> dict:
        return {"certainty": self.certainty, "polarity": self.polarity,
                "sentiment": self.sentiment, "emotion": self.emotion}

    @classmethod
    def from_dict(cls, d: dict) -> "Perspective":
        return cls(d.get("certainty", 0.9), d.get("polarity", 1),
                   d.get("sentiment", 0.0), d.get("emotion"))


@dataclass(frozen=True)
class TripleTerm:
    label: str
    type: str = ""     # entity type, e.g. person/location/object; empty for predicates
    iri: str | None = None

    def to_dict(self) -> dict:
        return {"label": self.label, "type": self.type, "iri": self.iri}

    @classmethod
    def from_dict(cls, d) -> "TripleTerm | None":
        if d is None:
            return None
        return cls(d.get("label", ""), d.get("type", ""), d.get("iri"))


@dataclass(frozen=True)
class ClaimCapsule:
    chat_id: str
    turn_id: int
    author: TripleTerm
    utterance: str
    utterance_type: str  # STATEMENT or QUESTION
    position: tuple  # (start_char, stop_char) within utterance
    subject: TripleTerm | None
    predicate: TripleTerm | None
    object: TripleTerm | None
    perspective: Perspective
    context_id: str
    timestamp: int

    def __post_init__(self):
        if self.utterance_type not in ("STATEMENT", "QUESTION"):
            raise MalformedCapsule(f"bad utterance_type: {self.utterance_type}")
        start, stop = self.position
        if not (0 <= start <= stop <= len(self.utterance)):
            raise MalformedCapsule(f"position {self.position} outside utterance")
        unbound = [t is None or not t.label for t in (self.subject, self.predicate, self.object)]
        if self.utterance_type == "STATEMENT" and any(unbound):
            raise MalformedCapsule("STATEMENT requires a complete triple")
        if self.utterance_type == "QUESTION" and sum(unbound) != 1:
            raise MalformedCapsule("QUESTION requires exactly one unbound slot")

    def to_dict(self) -> dict:
        return {
            "chat_id": self.chat_id,
            "turn_id": self.turn_id,
            "author": self.author.to_dict(),
            "utterance": self.utterance,
            "utterance_type": self.utterance_type,
            "position": list(self.position),
            "subject": self.subject.to_dict() if self.subject else None,
            "predicate": self.predicate.to_dict() if self.predicate else None,
            "object": self.object.to_dict() if self.object else None,
            "perspective": self.perspective.to_dict(),
            "context_id": self.context_id,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ClaimCapsule":
        try:
            return cls(
                chat_id=d["chat_id"],
                turn_id=d["turn_id"],
                author=TripleTerm.from_dict(d["author"]),
                utterance=d["utterance"],
                utterance_type=d["utterance_type"],
                position=tuple(d["position"]),
                subject=TripleTerm.from_dict(d.get("subject")),
                predicate=TripleTerm.from_dict(d.get("predicate")),
                object=TripleTerm.from_dict(d.get("object")),
                perspective=Perspective.from_dict(d.get("perspective", {})),
                context_id=d["context_id"],
                timestamp=d["timestamp"],
            )
        except (KeyError, TypeError) as e:
            raise MalformedCapsule(f"missing capsule field: {e}") from e


@dataclass(frozen=True)
class PerceptionCapsule:
    label: str
    type: str  # "object" or "person"
    certainty: float
    region: dict  # {"signal_id": ..., "bbox": [...] or "segment": {...}}
    context_id: str
    timestamp: int
    source: str  # sensor component id
    iri: str | None = None

    def __post_init__(self):
        if self.type not in ("object", "person"):
            raise MalformedCapsule(f"bad detection type: {self.type}")
        if not 0.0 <= self.certainty <= 1.0:
            raise MalformedCapsule(f"certainty out of range: {self.certainty}")
        if not self.label:
            raise MalformedCapsule("detection label required")
        if not self.source:
            raise MalformedCapsule("sensor source required")

    def to_dict(self) -> dict:
        return {
            "label": self.label, "type": self.type, "certainty": self.certainty,
            "region": self.region, "context_id": self.context_id,
            "timestamp": self.timestamp, "source": self.source, "iri": self.iri,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PerceptionCapsule":
        try:
            return cls(
                label=d["label"], type=d["type"], certainty=d["certainty"],
                region=d.get("region", {}), context_id=d["context_id"],
                timestamp=d["timestamp"], source=d["source"], iri=d.get("iri"),
            )
        except (KeyError, TypeError) as e:
            raise MalformedCapsule(f"missing capsule field: {e}") from e
