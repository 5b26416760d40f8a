"""Scenario data model: temporally grounded signals with annotated segments.

Every signal is anchored to its scenario's temporal ruler (integer epoch
milliseconds); mentions pick out sub-regions of signals and attach typed,
sourced annotations to them.
"""

from dataclasses import dataclass, field

MODALITIES = ("text", "audio", "image", "rdf")

ANNOTATION_VOCABULARY = {
    "speech",
    "transcript",
    "entity",
    "emotion",
    "object",
    "face",
    "identity",
    "triple",
    "gesture",
    "speaker",
}


@dataclass
class TemporalRuler:
    container_id: str
    start_ms: int
    end_ms: int | None = None  # None while the container is open

    @property
    def closed(self) -> bool:
        return self.end_ms is not None

    def to_dict(self) -> dict:
        return {"container_id": self.container_id, "start_ms": self.start_ms, "end_ms": self.end_ms}

    @classmethod
    def from_dict(cls, d: dict) -> "TemporalRuler":
        return cls(d["container_id"], d["start_ms"], d.get("end_ms"))


@dataclass
class TemporalSegment:
    signal_id: str
    start_ms: int
    end_ms: int

    def to_dict(self) -> dict:
        return {"type": "temporal", "signal_id": self.signal_id,
                "start_ms": self.start_ms, "end_ms": self.end_ms}


@dataclass
class TextIndex:
    signal_id: str
    start_char: int
    stop_char: int

    def to_dict(self) -> dict:
        return {"type": "text", "signal_id": self.signal_id,
                "start_char": self.start_char, "stop_char": self.stop_char}


@dataclass
class BoundingBox:
    signal_id: str
    x0: int
    y0: int
    x1: int
    y1: int

    def to_dict(self) -> dict:
        return {"type": "bbox", "signal_id": self.signal_id,
                "x0": self.x0, "y0": self.y0, "x1": self.x1, "y1": self.y1}


Segment = TemporalSegment | TextIndex | BoundingBox


def segment_from_dict(d: dict) -> Segment:
    kind = d.get("type")
    if kind == "temporal":
        return TemporalSegment(d["signal_id"], d["start_ms"], d["end_ms"])
    if kind == "text":
        return TextIndex(d["signal_id"], d["start_char"], d["stop_char"])
    if kind == "bbox":
        return BoundingBox(d["signal_id"], d["x0"], d["y0"], d["x1"], d["y1"])
    raise ValueError(f"unknown segment type: {kind!r}")


@dataclass
class Annotation:
    type: str
    value: object
    source: str
    timestamp: int

    def to_dict(self) -> dict:
        return {"type": self.type, "value": self.value,
                "source": self.source, "timestamp": self.timestamp}

    @classmethod
    def from_dict(cls, d: dict) -> "Annotation":
        return cls(d["type"], d["value"], d["source"], d["timestamp"])


@dataclass
class Mention:
    id: str
    segments: list
    annotations: list

    def to_dict(self) -> dict:
        return {"id": self.id,
                "segments": [s.to_dict() for s in self.segments],
                "annotations": [a.to_dict() for a in self.annotations]}

    @classmethod
    def from_dict(cls, d: dict) -> "Mention":
        return cls(d["id"],
                   [segment_from_dict(s) for s in d["segments"]],
                   [Annotation.from_dict(a) for a in d["annotations"]])


@dataclass
class Signal:
    id: str
    modality: str
    time: TemporalRuler
    source: str
    text: str | None = None       # inline data for text signals
    file: str | None = None       # relative media path for audio/image
    data: dict | None = None      # inline body for rdf signals (capsules)
    dims: list | None = None      # [width, height] for image signals
    mentions: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "modality": self.modality,
            "time": self.time.to_dict(),
            "source": self.source,
            "text": self.text,
            "file": self.file,
            "data": self.data,
            "dims": self.dims,
            "mentions": [m.to_dict() for m in self.mentions],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Signal":
        return cls(
            id=d["id"],
            modality=d["modality"],
            time=TemporalRuler.from_dict(d["time"]),
            source=d["source"],
            text=d.get("text"),
            file=d.get("file"),
            data=d.get("data"),
            dims=d.get("dims"),
            mentions=[Mention.from_dict(m) for m in d.get("mentions", [])],
        )


@dataclass
class Scenario:
    id: str
    ruler: TemporalRuler
    agent: str
    speaker: str = "unknown"
    context_id: str = ""
    signals: dict = field(default_factory=lambda: {m: [] for m in MODALITIES})

    def all_signals(self):
        for modality in MODALITIES:
            yield from self.signals[modality]

    def find_signal(self, signal_id: str) -> Signal | None:
        for signal in self.all_signals():
            if signal.id == signal_id:
                return signal
        return None

    def meta_dict(self) -> dict:
        return {
            "id": self.id,
            "ruler": self.ruler.to_dict(),
            "agent": self.agent,
            "speaker": self.speaker,
            "context_id": self.context_id,
        }

    @classmethod
    def from_meta(cls, meta: dict) -> "Scenario":
        return cls(
            id=meta["id"],
            ruler=TemporalRuler.from_dict(meta["ruler"]),
            agent=meta["agent"],
            speaker=meta.get("speaker", "unknown"),
            context_id=meta.get("context_id", ""),
        )
