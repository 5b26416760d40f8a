"""Text-path components: Eliza, mentions, triples, queries, emotion, NLG."""

from combus.text.eliza import ElizaEngine
from combus.text.emotion import EMOTION_VALENCE, detect_emotion
from combus.text.gestures import generate_gesture
from combus.text.linking import AmbiguousReferent, LinkResult, link_mentions
from combus.text.mentions import Gazetteer, TextMention, detect_mentions
from combus.text.nlg import verbalize_answer, verbalize_claim, verbalize_thoughts
from combus.text.queries import Query, UnrecognizedQuestion, extract_query
from combus.text.tokenize import Token, is_question, tokenize
from combus.text.triples import ExtractedTriple, extract_triples, to_capsule, vote

__all__ = [
    "AmbiguousReferent", "ElizaEngine", "EMOTION_VALENCE", "ExtractedTriple",
    "Gazetteer", "LinkResult", "Query", "TextMention", "Token",
    "UnrecognizedQuestion", "detect_emotion", "detect_mentions",
    "extract_query", "extract_triples", "generate_gesture", "is_question",
    "link_mentions", "to_capsule", "tokenize", "verbalize_answer",
    "verbalize_claim", "verbalize_thoughts", "vote",
]
