"""Mapping question utterances to eKG triple query patterns."""

from dataclasses import dataclass

from combus.text.mentions import Gazetteer
from combus.text.tokenize import tokenize


class UnrecognizedQuestion(Exception):
    RESPONSE = "I don't understand the question."


@dataclass(frozen=True)
class Query:
    subject: str | None   # surface label; None = open slot
    predicate: str
    object: str | None
    yes_no: bool = False


_BE = {"is", "are", "am", "was", "were"}
_DO = {"do", "does", "did"}
_SKIP = {"a", "an", "the"}


def extract_query(text: str, speaker: str, agent: str = "Leolani",
                  gazetteer: Gazetteer | None = None) -> Query:
    words = [t.text for t in tokenize(text) if t.text not in _SKIP]
    raw = {t.text: t.raw for t in tokenize(text)}

    def name(word):
        if word in ("i", "me", "my"):
            return speaker
        if word in ("you", "your"):
            return agent
        return raw.get(word, word)

    if len(words) >= 3:
        first = words[0]
        # "where does X live" / "where do I live"
        if first == "where" and words[1] in _DO and words[-1] in ("live", "lived"):
            return Query(name(words[2]), "live-in", None)
        # "where is X from" / "where am I from"
        if first == "where" and words[1] in _BE and words[-1] == "from":
            return Query(name(words[2]), "be-from", None)
        # "who lives in Y"
        if first == "who" and words[1] in ("lives", "live") and words[2] == "in":
            return Query(None, "live-in", name(words[3]) if len(words) > 3 else None)
        # "who is from Y"
        if first == "who" and words[1] in _BE and words[2] == "from" and len(words) > 3:
            return Query(None, "be-from", name(words[3]))
        # "who likes Y"
        if first == "who" and words[1] in ("likes", "like"):
            return Query(None, "like", name(words[2]))
        # "does X like Y" -> closed yes/no pattern
        if first in _DO and len(words) >= 4 and words[2] in ("like", "likes"):
            return Query(name(words[1]), "like", name(words[3]), yes_no=True)
        # "does X have Y"
        if first in _DO and len(words) >= 4 and words[2] in ("have", "has"):
            return Query(name(words[1]), "have", name(words[3]), yes_no=True)
        # "what does X like" / "what does X have"
        if first == "what" and words[1] in _DO and words[-1] in ("like", "likes"):
            return Query(name(words[2]), "like", None)
        if first == "what" and words[1] in _DO and words[-1] in ("have", "has"):
            return Query(name(words[2]), "have", None)
    raise UnrecognizedQuestion(text)
