"""TopicWorker: sequential single-event processing harness.

A worker owns exactly one subscription covering all its input topics; every
transport serializes delivery per subscription, so the processor only ever
runs one event at a time. Processor failures are published to the "errors"
topic as diagnostic events and never kill the worker.
"""

import logging
import threading
from typing import Callable, Iterable, Optional, Sequence

from combus.eventbus.bus import EventBus, Subscription
from combus.eventbus.events import Event, Payload, TextSignalEvent

logger = logging.getLogger(__name__)

ERROR_TOPIC = "errors"


class Routed:
    """Processor result addressed to one topic instead of all output topics."""

    __slots__ = ("topic", "payload")

    def __init__(self, topic: str, payload: Payload):
        self.topic = topic
        self.payload = payload


class TopicWorker:
    def __init__(
        self,
        name: str,
        bus: EventBus,
        input_topics: Iterable[str],
        processor: Callable[[Event], Optional[Payload | Sequence[Payload]]],
        output_topics: Sequence[str] = (),
        gate: Callable[[str, str], bool] | None = None,
    ):
        self.name = name
        self.bus = bus
        self.input_topics = list(input_topics)
        self.output_topics = list(output_topics)
        self.processor = processor
        # gate(component, topic) -> enabled; disabled events are dropped
        self.gate = gate
        self._sub: Subscription | None = None
        self._started = threading.Event()
        self.processed = 0
        self.dropped = 0

    def start(self) -> "TopicWorker":
        if self._sub is None:
            self._sub = self.bus.subscribe(self.input_topics, self.name, self._handle)
            self._started.set()
        return self

    def wait(self, timeout: float = 5.0) -> None:
        self._started.wait(timeout)

    def stop(self) -> None:
        if self._sub is not None:
            self.bus.unsubscribe(self._sub)
            self._sub = None
            self._started.clear()

    @property
    def running(self) -> bool:
        return self._sub is not None

    def _handle(self, event: Event) -> None:
        if self.gate is not None and not self.gate(self.name, event.topic):
            self.dropped += 1
            return
        try:
            result = self.processor(event)
        except Exception as e:
            logger.exception("worker %s failed processing %s", self.name, event.id)
            diagnostic = TextSignalEvent(
                signal={
                    "error": f"{type(e).__name__}: {e}",
                    "worker": self.name,
                    "event_id": event.id,
                    "topic": event.topic,
                }
            )
            try:
                self.bus.emit(ERROR_TOPIC, diagnostic, self.name)
            except Exception:
                logger.exception("worker %s could not publish diagnostic", self.name)
            return
        self.processed += 1
        if result is None:
            return
        payloads = result if isinstance(result, (list, tuple)) else [result]
        for payload in payloads:
            if isinstance(payload, Routed):
                self.bus.emit(payload.topic, payload.payload, self.name)
                continue
            for topic in self.output_topics:
                self.bus.emit(topic, payload, self.name)
