"""Self-delimiting wire frames: 4-byte big-endian length + canonical JSON."""

import json
import struct

from combus.eventbus.errors import FrameTooLarge, MalformedFrame
from combus.eventbus.events import Event, event_from_json, event_to_json

MAX_FRAME = 16 * 1024 * 1024

HEADER = struct.Struct(">I")


def canonical_json(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode(
        "utf-8"
    )


def encode_frame(obj: dict) -> bytes:
    body = canonical_json(obj)
    if len(body) > MAX_FRAME:
        raise FrameTooLarge(f"frame body of {len(body)} bytes exceeds {MAX_FRAME}")
    return HEADER.pack(len(body)) + body


def decode_frame(data: bytes) -> tuple[dict, bytes]:
    """Decode one frame from the head of data; returns (object, remainder)."""
    if len(data) < HEADER.size:
        raise MalformedFrame("truncated frame header")
    (length,) = HEADER.unpack_from(data)
    if length > MAX_FRAME:
        raise FrameTooLarge(f"declared frame length {length} exceeds {MAX_FRAME}")
    if len(data) < HEADER.size + length:
        raise MalformedFrame("truncated frame body")
    body = data[HEADER.size : HEADER.size + length]
    try:
        obj = json.loads(body.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise MalformedFrame(f"frame body is not valid JSON: {e}") from e
    if not isinstance(obj, dict):
        raise MalformedFrame("frame body must be a JSON object")
    return obj, data[HEADER.size + length :]


def broker_frame_encode(event: Event) -> bytes:
    return encode_frame(event_to_json(event))


def broker_frame_decode(data: bytes) -> Event:
    obj, rest = decode_frame(data)
    if rest:
        raise MalformedFrame(f"{len(rest)} trailing bytes after frame")
    return event_from_json(obj)


def read_frame(sock) -> dict | None:
    """Read one frame from a socket; None on clean EOF at a frame boundary."""
    header = _read_exact(sock, HEADER.size)
    if header is None:
        return None
    (length,) = HEADER.unpack(header)
    if length > MAX_FRAME:
        raise FrameTooLarge(f"declared frame length {length} exceeds {MAX_FRAME}")
    body = _read_exact(sock, length)
    if body is None:
        raise MalformedFrame("connection closed mid-frame")
    try:
        obj = json.loads(body.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise MalformedFrame(f"frame body is not valid JSON: {e}") from e
    return obj


def _read_exact(sock, n: int) -> bytes | None:
    chunks = []
    remaining = n
    while remaining:
        chunk = sock.recv(remaining)
        if not chunk:
            if remaining == n:
                return None
            raise MalformedFrame("connection closed mid-frame")
        chunks.append(chunk)
        remaining -= len(chunk)
    return b"".join(chunks)
