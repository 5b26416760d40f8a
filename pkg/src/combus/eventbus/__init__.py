from combus.eventbus.events import (
    Event,
    Payload,
    SignalStarted,
    SignalData,
    SignalStopped,
    MentionCreated,
    TextSignalEvent,
    CapsuleEvent,
    ThoughtsEvent,
    IntentionChanged,
    ControlCommand,
    event_to_json,
    event_from_json,
    validate_topic,
)
from combus.eventbus.errors import (
    BusError,
    BusStopped,
    DuplicateHandlerOnTopic,
    InvalidTopic,
    PayloadSchemaViolation,
    FrameTooLarge,
    MalformedFrame,
    UnknownPayloadTag,
)
from combus.eventbus.bus import EventBus, InlineEventBus, QueuedEventBus, Subscription
from combus.eventbus.worker import TopicWorker
