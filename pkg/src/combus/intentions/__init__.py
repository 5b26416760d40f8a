"""Prioritized intention management over bus events."""

from combus.intentions.manager import (
    IntentionManager,
    IntentionSpec,
    UnknownIntentionReference,
    load_intention_config,
    register_builtin_intentions,
)

__all__ = [
    "IntentionManager", "IntentionSpec", "UnknownIntentionReference",
    "load_intention_config", "register_builtin_intentions",
]
