"""Emotion-to-gesture label mapping."""

import logging

log = logging.getLogger(__name__)

GESTURES = {
    "joy": "open_arms",
    "sadness": "slow_nod",
    "anger": "step_back",
    "fear": "step_back",
    "surprise": "head_tilt",
    "neutral": "idle",
}


def generate_gesture(emotion: str) -> str:
    gesture = GESTURES.get(emotion)
    if gesture is None:
        log.warning("unknown emotion label %r, falling back to idle", emotion)
        return "idle"
    return gesture
