"""Rule-grammar triple extraction from statement utterances."""

import json
from dataclasses import dataclass, replace
from importlib import resources

from combus.ekg.capsules import ClaimCapsule, Perspective, TripleTerm
from combus.text.emotion import EMOTION_VALENCE, detect_emotion
from combus.text.mentions import Gazetteer
from combus.text.tokenize import is_question, tokenize

NEGATIONS = {"not", "don't", "dont", "never"}
ARTICLES = {"a", "an", "the"}
AUXILIARIES = {"do", "does", "did"}
_SKIP = NEGATIONS | ARTICLES | AUXILIARIES

# fallback object types when the gazetteer has no entry
_OBJECT_TYPE_FOR = {"be-from": "location", "live-in": "location",
                    "like": "object", "have": "object"}


def _load_templates():
    with resources.files("combus.data.config").joinpath("triple_templates.json").open() as f:
        return json.load(f)


@dataclass(frozen=True)
class ExtractedTriple:
    subject: TripleTerm
    predicate: TripleTerm
    object: TripleTerm
    perspective: Perspective
    position: tuple  # (start_char, stop_char) within the utterance


def _strip_hedges(tokens):
    """Remove hedge markers; report whether any were present."""
    out = []
    hedged = False
    i = 0
    while i < len(tokens):
        t = tokens[i]
        if t.text in ("maybe", "perhaps", "probably"):
            hedged = True
        elif t.text == "i" and i + 1 < len(tokens) and tokens[i + 1].text == "think":
            hedged = True
            i += 1
        else:
            out.append(t)
        i += 1
    return out, hedged


def extract_triples(text: str, speaker: str, agent: str = "Leolani",
                    gazetteer: Gazetteer | None = None,
                    templates: list | None = None) -> list[ExtractedTriple]:
    """Extract at most one claim triple from a statement utterance."""
    if is_question(text) or not text.strip():
        return []
    gazetteer = gazetteer or Gazetteer()
    templates = templates if templates is not None else _load_templates()

    tokens, hedged = _strip_hedges(tokenize(text))
    negated = any(t.text in NEGATIONS for t in tokens)

    for template in templates:
        verbs = set(template["verbs"])
        particle = template["particle"]
        for v, tok in enumerate(tokens):
            if tok.text not in verbs:
                continue
            obj_from = v + 1
            if particle:
                k = v + 1
                while k < len(tokens) and tokens[k].text in NEGATIONS:
                    k += 1
                if k >= len(tokens) or tokens[k].text != particle:
                    continue
                obj_from = k + 1
            subject_toks = [t for t in tokens[:v] if t.text not in _SKIP]
            object_toks = [t for t in tokens[obj_from:] if t.text not in _SKIP]
            if not subject_toks or not object_toks:
                continue
            subject_tok = subject_toks[-1]
            predicate = template["predicate"]
            emotion = detect_emotion(text)
            perspective = Perspective(
                certainty=0.5 if hedged else 0.9,
                polarity=-1 if negated else 1,
                sentiment=EMOTION_VALENCE.get(emotion, 0.0),
                emotion=emotion,
            )
            return [ExtractedTriple(
                subject=_term(subject_tok.raw, speaker, agent, gazetteer, "person"),
                predicate=TripleTerm(predicate),
                object=_term(" ".join(t.raw for t in object_toks), speaker, agent,
                             gazetteer, _OBJECT_TYPE_FOR.get(predicate, "thing")),
                perspective=perspective,
                position=(subject_tok.start, object_toks[-1].stop),
            )]
    return []


def _term(label: str, speaker: str, agent: str, gazetteer: Gazetteer,
          fallback_type: str) -> TripleTerm:
    word = label.lower()
    if word in ("i", "me", "my"):
        return TripleTerm(speaker, "person")
    if word in ("you", "your"):
        return TripleTerm(agent, "person")
    return TripleTerm(label, gazetteer.entity_type(word) or fallback_type)


def to_capsule(triple: ExtractedTriple, chat_id: str, turn_id: int, author: str,
               utterance: str, context_id: str, timestamp: int) -> ClaimCapsule:
    return ClaimCapsule(
        chat_id=chat_id,
        turn_id=turn_id,
        author=TripleTerm(author, "person"),
        utterance=utterance,
        utterance_type="STATEMENT",
        position=triple.position,
        subject=triple.subject,
        predicate=triple.predicate,
        object=triple.object,
        perspective=triple.perspective,
        context_id=context_id,
        timestamp=timestamp,
    )


def vote(extractions: list[list[ExtractedTriple]]) -> list[ExtractedTriple]:
    """Merge parallel extractor outputs: identical triples pool certainty."""
    merged: dict[tuple, ExtractedTriple] = {}
    for batch in extractions:
        for t in batch:
            key = (t.subject.label.lower(), t.predicate.label, t.object.label.lower(),
                   t.perspective.polarity)
            if key in merged:
                prev = merged[key]
                pooled = min(0.99, prev.perspective.certainty + t.perspective.certainty)
                merged[key] = replace(
                    prev, perspective=replace(prev.perspective, certainty=pooled))
            else:
                merged[key] = t
    return list(merged.values())
