"""WAV helpers. Fixture format is fixed: PCM16 mono 16 kHz."""

import io
import struct
import wave

RATE = 16000
FRAME_MS = 20
FRAME_SAMPLES = RATE * FRAME_MS // 1000  # 320


class UnsupportedFormat(Exception):
    pass


def read_wav(data: bytes) -> bytes:
    """Return raw PCM16 sample bytes, validating the fixture format."""
    try:
        with wave.open(io.BytesIO(data)) as wf:
            if wf.getnchannels() != 1 or wf.getsampwidth() != 2 or wf.getframerate() != RATE:
                raise UnsupportedFormat(
                    f"expected PCM16 mono {RATE} Hz, got "
                    f"{wf.getnchannels()}ch {8 * wf.getsampwidth()}bit {wf.getframerate()} Hz"
                )
            return wf.readframes(wf.getnframes())
    except wave.Error as e:
        raise UnsupportedFormat(str(e)) from e


def write_wav(samples: bytes) -> bytes:
    buf = io.BytesIO()
    with wave.open(buf, "wb") as wf:
        wf.setnchannels(1)
        wf.setsampwidth(2)
        wf.setframerate(RATE)
        wf.writeframes(samples)
    return buf.getvalue()


def frame_rms(frame: bytes) -> float:
    """RMS of one PCM16 frame on a 0..1 full scale."""
    count = len(frame) // 2
    if count == 0:
        return 0.0
    values = struct.unpack(f"<{count}h", frame[: count * 2])
    return (sum(v * v for v in values) / count) ** 0.5 / 32768.0


def iter_frames(samples: bytes):
    """Yield 20 ms frames; the final frame may be shorter."""
    step = FRAME_SAMPLES * 2
    for offset in range(0, len(samples), step):
        yield samples[offset : offset + step]


def duration_ms(samples: bytes) -> int:
    return len(samples) // 2 * 1000 // RATE
