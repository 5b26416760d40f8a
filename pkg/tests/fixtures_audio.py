"""Deterministic audio/image fixture builders shared by the test suites."""

import math
import struct
import zlib

from combus.audio.wav import RATE, write_wav

TONE_AMPLITUDE = 0.3
TONE_HZ = 440.0


def tone_samples(duration_ms: int, amplitude: float = TONE_AMPLITUDE) -> bytes:
    n = RATE * duration_ms // 1000
    out = bytearray()
    for i in range(n):
        value = int(amplitude * 32767 * math.sin(2 * math.pi * TONE_HZ * i / RATE))
        out += struct.pack("<h", value)
    return bytes(out)


def silence_samples(duration_ms: int) -> bytes:
    return b"\x00\x00" * (RATE * duration_ms // 1000)


def utterance_samples(lead_ms: int, tone_ms: int, tail_ms: int) -> bytes:
    return silence_samples(lead_ms) + tone_samples(tone_ms) + silence_samples(tail_ms)


def utterance_wav(lead_ms: int, tone_ms: int, tail_ms: int) -> bytes:
    return write_wav(utterance_samples(lead_ms, tone_ms, tail_ms))


def tiny_png(width: int = 4, height: int = 4) -> bytes:
    """Minimal valid grayscale PNG."""
    def chunk(kind: bytes, body: bytes) -> bytes:
        return (struct.pack(">I", len(body)) + kind + body
                + struct.pack(">I", zlib.crc32(kind + body)))

    header = struct.pack(">IIBBBBB", width, height, 8, 0, 0, 0, 0)
    raw = b"".join(b"\x00" + b"\x80" * width for _ in range(height))
    return (b"\x89PNG\r\n\x1a\n"
            + chunk(b"IHDR", header)
            + chunk(b"IDAT", zlib.compress(raw))
            + chunk(b"IEND", b""))
