"""Name and object mention detection over text signals."""

import json
from dataclasses import dataclass
from importlib import resources

from combus.text.tokenize import tokenize


def _load_json(name):
    with resources.files("combus.data.config").joinpath(name).open() as f:
        return json.load(f)


class Gazetteer:
    """Known person names, locations, and recognizable object nouns."""

    def __init__(self, data: dict | None = None, objects: list | None = None):
        data = data if data is not None else _load_json("gazetteer.json")
        self.names = {n.lower() for n in data.get("names", [])}
        self.locations = {n.lower() for n in data.get("locations", [])}
        self.agent_cues = [c.lower() for c in data.get("agent_cues", [])]
        if objects is None:
            objects = _load_json("object_lexicon.json")
        self.objects = {n.lower() for n in objects}

    def entity_type(self, word: str) -> str | None:
        word = word.lower()
        if word in self.names:
            return "person"
        if word in self.locations:
            return "location"
        if word in self.objects:
            return "object"
        return None


@dataclass(frozen=True)
class TextMention:
    label: str
    type: str  # person | location | object
    start: int
    stop: int


_PRONOUNS = {"i", "you", "me", "my", "your", "he", "she", "it", "we", "they"}


def detect_mentions(text: str, gazetteer: Gazetteer | None = None) -> list[TextMention]:
    gazetteer = gazetteer or Gazetteer()
    tokens = tokenize(text)
    mentions = []
    sentence_start = True
    for i, tok in enumerate(tokens):
        known = gazetteer.entity_type(tok.text)
        if tok.text in _PRONOUNS:
            pass
        elif tok.raw[0].isupper() and (not sentence_start or tok.text in gazetteer.names
                                       or tok.text in gazetteer.locations):
            # capitalized mid-sentence, or sentence-initial but gazetteered
            mentions.append(TextMention(tok.raw, known or "person", tok.start, tok.stop))
        elif known == "object":
            mentions.append(TextMention(tok.raw, "object", tok.start, tok.stop))
        gap_end = tokens[i + 1].start if i + 1 < len(tokens) else len(text)
        sentence_start = any(c in ".!?" for c in text[tok.stop:gap_end])
    return mentions
