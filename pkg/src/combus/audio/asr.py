"""Transcript-lookup speech recognition.

Real speech models are replaced by a deterministic stand-in: the SHA-256
of a speech segment's sample bytes is looked up in a transcript table.
The event contract matches a real recognizer, so one can be swapped in
by configuration.
"""

import hashlib
import json
from pathlib import Path

FALLBACK_TEXT = "(unintelligible)"
FALLBACK_CERTAINTY = 0.1
HIT_CERTAINTY = 0.95


class TranscriptLookup:
    def __init__(self, transcripts: dict | None = None):
        self.transcripts = dict(transcripts or {})

    @classmethod
    def load(cls, path) -> "TranscriptLookup":
        return cls(json.loads(Path(path).read_text("utf-8")))

    @staticmethod
    def digest(segment_samples: bytes) -> str:
        return hashlib.sha256(segment_samples).hexdigest()

    def transcribe(self, segment_samples: bytes) -> tuple[str, float]:
        """(transcript, certainty); a miss is a value, not an error."""
        text = self.transcripts.get(self.digest(segment_samples))
        if text is None:
            return FALLBACK_TEXT, FALLBACK_CERTAINTY
        return text, HIT_CERTAINTY

    def register(self, segment_samples: bytes, text: str) -> str:
        key = self.digest(segment_samples)
        self.transcripts[key] = text
        return key
