"""Lexicon-based emotion detection."""

import json
from importlib import resources

from combus.text.tokenize import tokenize

EMOTION_VALENCE = {
    "joy": 1.0,
    "surprise": 0.0,
    "neutral": 0.0,
    "sadness": -1.0,
    "anger": -1.0,
    "fear": -1.0,
}

_lexicon_cache = None


def default_lexicon() -> dict:
    global _lexicon_cache
    if _lexicon_cache is None:
        with resources.files("combus.data.config").joinpath("emotion_lexicon.json").open() as f:
            _lexicon_cache = json.load(f)
    return _lexicon_cache


def detect_emotion(text: str, lexicon: dict | None = None) -> str:
    """Argmax over lexicon hit counts; ties and no hits give neutral."""
    lexicon = lexicon or default_lexicon()
    counts: dict[str, int] = {}
    for token in tokenize(text):
        label = lexicon.get(token.text)
        if label:
            counts[label] = counts.get(label, 0) + 1
    if not counts:
        return "neutral"
    best = max(counts.values())
    winners = [label for label, n in counts.items() if n == best]
    return winners[0] if len(winners) == 1 else "neutral"
