"""Energy-threshold voice activity detection over 20 ms frames.

Maximal runs of frames with RMS at or above the threshold that last at
least the minimum duration become speech segments, padded on both sides
and clipped to the signal bounds.
"""

from dataclasses import dataclass

from combus.audio.wav import FRAME_MS, duration_ms, iter_frames, frame_rms


@dataclass
class VadConfig:
    rms_threshold: float = 0.02   # full-scale
    min_speech_ms: int = 200
    padding_ms: int = 100


def detect_speech(samples: bytes, config: VadConfig | None = None) -> list:
    """Speech segments as (start_ms, end_ms) pairs relative to signal start."""
    config = config or VadConfig()
    total_ms = duration_ms(samples)
    active = [frame_rms(frame) >= config.rms_threshold for frame in iter_frames(samples)]

    segments = []
    run_start = None
    for i, is_active in enumerate(active + [False]):
        if is_active and run_start is None:
            run_start = i
        elif not is_active and run_start is not None:
            start_ms = run_start * FRAME_MS
            end_ms = i * FRAME_MS
            if end_ms - start_ms >= config.min_speech_ms:
                segments.append((
                    max(0, start_ms - config.padding_ms),
                    min(total_ms, end_ms + config.padding_ms),
                ))
            run_start = None

    # padding may make neighbours touch; merge to keep segments disjoint
    merged = []
    for start, end in segments:
        if merged and start <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], end))
        else:
            merged.append((start, end))
    return merged
