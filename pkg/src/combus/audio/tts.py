"""Placeholder text-to-speech: silent audio sized by word count."""

from combus.audio.wav import RATE

MS_PER_WORD = 60
MIN_MS = 200


def speech_duration_ms(text: str) -> int:
    words = len(text.split())
    return max(MIN_MS, words * MS_PER_WORD)


def synthesize(text: str) -> bytes:
    """Silent PCM16 samples of the placeholder utterance."""
    duration = speech_duration_ms(text)
    return b"\x00\x00" * (RATE * duration // 1000)
