"""Event envelope and the typed payload union carried on the bus."""

import re
from dataclasses import dataclass, field, fields

from combus.eventbus.errors import InvalidTopic, PayloadSchemaViolation, UnknownPayloadTag

TOPIC_RE = re.compile(r"^[a-z0-9][a-z0-9._-]*$")
MAX_TOPIC_LEN = 128

CONTROL_COMMANDS = frozenset(
    {"mute", "unmute", "shutdown", "consent-granted", "consent-denied"}
)


def validate_topic(name: str) -> str:
    if not isinstance(name, str) or not name or len(name) > MAX_TOPIC_LEN:
        raise InvalidTopic(f"invalid topic name: {name!r}")
    if not TOPIC_RE.match(name):
        raise InvalidTopic(f"invalid topic name: {name!r}")
    return name


@dataclass(frozen=True)
class Payload:
    TAG = "Payload"

    def to_json(self) -> dict:
        body = {"type": self.TAG}
        for f in fields(self):
            body[f.name] = getattr(self, f.name)
        return body


@dataclass(frozen=True)
class SignalStarted(Payload):
    TAG = "SignalStarted"
    signal_ref: str = ""
    modality: str = ""


@dataclass(frozen=True)
class SignalData(Payload):
    TAG = "SignalData"
    signal_ref: str = ""
    # chunk keys: "data" (hex-encoded bytes), "start_ms", "end_ms"
    chunk: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SignalStopped(Payload):
    TAG = "SignalStopped"
    signal_ref: str = ""


@dataclass(frozen=True)
class MentionCreated(Payload):
    TAG = "MentionCreated"
    mention: dict = field(default_factory=dict)


@dataclass(frozen=True)
class TextSignalEvent(Payload):
    TAG = "TextSignalEvent"
    signal: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CapsuleEvent(Payload):
    TAG = "CapsuleEvent"
    capsule: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ThoughtsEvent(Payload):
    TAG = "ThoughtsEvent"
    thoughts: dict = field(default_factory=dict)


@dataclass(frozen=True)
class IntentionChanged(Payload):
    TAG = "IntentionChanged"
    intention: str = ""


@dataclass(frozen=True)
class ControlCommand(Payload):
    TAG = "ControlCommand"
    command: str = ""

    def __post_init__(self):
        if self.command not in CONTROL_COMMANDS:
            raise PayloadSchemaViolation(f"unknown control command: {self.command!r}")


PAYLOAD_TYPES = {
    cls.TAG: cls
    for cls in (
        SignalStarted,
        SignalData,
        SignalStopped,
        MentionCreated,
        TextSignalEvent,
        CapsuleEvent,
        ThoughtsEvent,
        IntentionChanged,
        ControlCommand,
    )
}


def payload_from_json(body: dict) -> Payload:
    if not isinstance(body, dict) or "type" not in body:
        raise UnknownPayloadTag("payload object missing 'type'")
    tag = body["type"]
    cls = PAYLOAD_TYPES.get(tag)
    if cls is None:
        raise UnknownPayloadTag(f"unknown payload tag: {tag!r}")
    kwargs = {k: v for k, v in body.items() if k != "type"}
    allowed = {f.name for f in fields(cls)}
    extra = set(kwargs) - allowed
    if extra:
        raise UnknownPayloadTag(f"unexpected payload fields for {tag}: {sorted(extra)}")
    return cls(**kwargs)


@dataclass(frozen=True)
class Event:
    """Timestamped, sourced envelope for one payload on one topic.

    seq is None until the bus assigns it at publish time.
    """

    id: str
    topic: str
    source: str
    timestamp: int
    payload: Payload
    seq: int | None = None

    def with_seq(self, seq: int) -> "Event":
        return Event(self.id, self.topic, self.source, self.timestamp, self.payload, seq)


def event_to_json(event: Event) -> dict:
    return {
        "id": event.id,
        "topic": event.topic,
        "seq": event.seq,
        "source": event.source,
        "timestamp": event.timestamp,
        "payload": event.payload.to_json(),
    }


def event_from_json(obj: dict) -> Event:
    try:
        return Event(
            id=obj["id"],
            topic=obj["topic"],
            source=obj["source"],
            timestamp=obj["timestamp"],
            payload=payload_from_json(obj["payload"]),
            seq=obj.get("seq"),
        )
    except KeyError as e:
        raise UnknownPayloadTag(f"event object missing field {e}") from e
