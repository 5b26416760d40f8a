"""Speaker identification against registered voice vectors.

Experimental: vectors come from fixture sidecars rather than a real
embedding model; the event contract matches the eventual implementation.
"""

import json
import math
from pathlib import Path

DIM = 32
MATCH_THRESHOLD = 0.85  # closed: a score of exactly 0.85 matches
UNIT_TOLERANCE = 1e-6


class VoiceRegistry:
    def __init__(self, voices: dict | None = None):
        self.voices = {}
        for label, vector in (voices or {}).items():
            self.add(label, vector)

    @classmethod
    def load(cls, path) -> "VoiceRegistry":
        return cls(json.loads(Path(path).read_text("utf-8")))

    def add(self, label: str, vector) -> None:
        vector = [float(x) for x in vector]
        if len(vector) != DIM:
            raise ValueError(f"voice vector must have dim {DIM}, got {len(vector)}")
        norm = math.sqrt(sum(x * x for x in vector))
        if abs(norm - 1.0) > UNIT_TOLERANCE:
            raise ValueError(f"voice vector for {label!r} not unit norm: {norm}")
        self.voices[label] = vector


def cosine(a, b) -> float:
    return sum(x * y for x, y in zip(a, b))


def identify_speaker(vector, registry: VoiceRegistry) -> dict | None:
    """Best registry match at or above threshold, else None (unknown)."""
    best = None
    for label, registered in sorted(registry.voices.items()):
        score = cosine(vector, registered)
        if best is None or score > best[1]:
            best = (label, score)
    if best is None or best[1] < MATCH_THRESHOLD:
        return None
    return {"name": best[0], "score": best[1]}
