"""Data-driven intention state machine.

Each intention prioritizes a set of (component, topic) bindings. The manager
watches bus events: activation predicates switch intentions on, completion
predicates switch them off and chain follow-ups. Workers consult the
manager's gate, so a deactivated component's inputs are dropped silently.
"""

import json
from dataclasses import dataclass, field
from importlib import resources

from combus.eventbus.events import IntentionChanged

INTENTION_TOPIC = "intention"


class UnknownIntentionReference(Exception):
    pass


def load_intention_config(path=None) -> dict:
    if path is None:
        with resources.files("combus.data.config").joinpath("intentions.json").open() as f:
            return json.load(f)
    with open(path) as f:
        return json.load(f)


@dataclass(frozen=True)
class IntentionSpec:
    name: str
    priority: int
    bindings: tuple  # ((component, (topic, ...)), ...)
    dialog: bool = False      # member of the exclusive dialog group
    one_shot: bool = False    # completes on its own activation event
    activation: dict | None = None
    completion: dict | None = None
    on_complete: tuple = ()

    @classmethod
    def from_dict(cls, d: dict) -> "IntentionSpec":
        bindings = tuple((c, tuple(topics)) for c, topics in d.get("bindings", []))
        if not bindings:
            raise ValueError(f"intention {d.get('name')!r} has no bindings")
        return cls(
            name=d["name"],
            priority=d["priority"],
            bindings=bindings,
            dialog=d.get("dialog", False),
            one_shot=d.get("one_shot", False),
            activation=d.get("activation"),
            completion=d.get("completion"),
            on_complete=tuple(d.get("on_complete", [])),
        )


def _matches(predicate: dict | None, event) -> bool:
    """Decide a predicate on a single event."""
    if predicate is None:
        return False
    payload = event.payload
    if "topic" in predicate and event.topic != predicate["topic"]:
        return False
    if "payload_type" in predicate and payload.TAG != predicate["payload_type"]:
        return False
    if "command_in" in predicate:
        if getattr(payload, "command", None) not in predicate["command_in"]:
            return False
    if "text_contains_any" in predicate:
        text = ""
        if payload.TAG == "TextSignalEvent":
            text = str(payload.signal.get("text", "")).lower()
        if not any(cue in text for cue in predicate["text_contains_any"]):
            return False
    if predicate.get("new_identity"):
        if payload.TAG != "MentionCreated":
            return False
        annotations = payload.mention.get("annotations", [])
        if not any(a.get("type") == "identity" and a.get("value", {}).get("new")
                   for a in annotations):
            return False
    return True


class IntentionManager:
    def __init__(self, specs, initial=()):
        self.specs: dict[str, IntentionSpec] = {}
        self._order: dict[str, int] = {}
        for spec in specs:
            if spec.name in self.specs:
                raise UnknownIntentionReference(f"duplicate intention: {spec.name}")
            self._order[spec.name] = len(self.specs)
            self.specs[spec.name] = spec
        for spec in self.specs.values():
            for name in spec.on_complete:
                if name not in self.specs:
                    raise UnknownIntentionReference(
                        f"{spec.name} chains unknown intention {name!r}")
        self._active: set[str] = set()
        # bindings of a one-shot intention stay enabled while its own
        # triggering event fans out to the other subscribers
        self._grace: set = set()
        self.history: list[str] = []
        self._gated_components = {c for s in self.specs.values() for c, _ in s.bindings}
        for name in initial:
            self._activate(name)

    # -- state -----------------------------------------------------------
    def active(self) -> list[str]:
        return sorted(self._active,
                      key=lambda n: (-self.specs[n].priority, self._order[n]))

    def enabled_bindings(self) -> set:
        # a higher-priority active intention (Greeting, Goodbye, consent)
        # preempts lower-priority dialog intentions until it completes
        top = max((self.specs[n].priority for n in self._active), default=0)
        return {(component, topic)
                for name in self._active
                if not self.specs[name].dialog or self.specs[name].priority >= top
                for component, topics in self.specs[name].bindings
                for topic in topics}

    def gate(self, component: str, topic: str) -> bool:
        """TopicWorker gate: may this component process events on this topic?"""
        if component not in self._gated_components:
            return True
        if (component, topic) in self._grace:
            return True
        return (component, topic) in self.enabled_bindings()

    def _activate(self, name: str):
        if name not in self.specs:
            raise UnknownIntentionReference(name)
        spec = self.specs[name]
        changed = []
        if spec.dialog:
            for other in list(self._active):
                if self.specs[other].dialog and other != name:
                    self._active.discard(other)
        if name not in self._active:
            self._active.add(name)
            self.history.append(name)
            changed.append(IntentionChanged(intention=name))
        return changed

    # -- event evaluation ------------------------------------------------
    def evaluate(self, event) -> list[IntentionChanged]:
        """Apply one event; returns the IntentionChanged payloads to publish."""
        changed = []
        self._grace = set()

        # completions first, so an event can both complete one intention and
        # activate the next
        for name in self.active():
            spec = self.specs[name]
            if spec.completion is not None and _matches(spec.completion, event):
                self._active.discard(name)
                for follow_up in spec.on_complete:
                    changed.extend(self._activate(follow_up))

        # highest priority newly satisfied activation wins; ties break by
        # registration order
        candidates = [
            spec for spec in self.specs.values()
            if spec.name not in self._active and _matches(spec.activation, event)
        ]
        if candidates:
            winner = min(candidates,
                         key=lambda s: (-s.priority, self._order[s.name]))
            changed.extend(self._activate(winner.name))
            if winner.one_shot:
                self._active.discard(winner.name)
                self._grace = {(c, t) for c, topics in winner.bindings
                               for t in topics}
                for follow_up in winner.on_complete:
                    changed.extend(self._activate(follow_up))
        return changed


def register_builtin_intentions(config: dict | None = None,
                                initial=None) -> IntentionManager:
    config = config or load_intention_config()
    specs = [IntentionSpec.from_dict(d) for d in config["intentions"]]
    if initial is None:
        initial = config.get("initial", [])
    return IntentionManager(specs, initial=initial)
