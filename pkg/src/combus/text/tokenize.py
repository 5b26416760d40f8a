"""Shared English tokenization and the statement/question classifier."""

import re
from typing import NamedTuple

_WORD = re.compile(r"[A-Za-z0-9']+")

QUESTION_STARTERS = {
    "who", "what", "where", "when", "do", "does", "did", "is", "are", "can",
}


class Token(NamedTuple):
    text: str   # lowercased
    raw: str    # original casing
    start: int  # char offset in source
    stop: int   # exclusive


def tokenize(text: str) -> list[Token]:
    return [
        Token(m.group().lower(), m.group(), m.start(), m.end())
        for m in _WORD.finditer(text)
    ]


def is_question(text: str) -> bool:
    if "?" in text:
        return True
    tokens = tokenize(text)
    return bool(tokens) and tokens[0].text in QUESTION_STARTERS
