"""Local event-bus transports: inline (synchronous) and queued (threaded).

Both assign per-topic monotone sequence numbers centrally and guarantee
per-topic FIFO delivery to every subscription. Delivery is at-most-once,
in-memory, with no durability.
"""

import logging
import queue
import threading
from collections import defaultdict
from typing import Callable, Iterable

from combus.clock import SystemClock
from combus.ids import IdGenerator
from combus.eventbus.errors import (
    BusStopped,
    DuplicateHandlerOnTopic,
    PayloadSchemaViolation,
    ReentrancyLimitExceeded,
)
from combus.eventbus.events import (
    PAYLOAD_TYPES,
    Event,
    Payload,
    validate_topic,
)

logger = logging.getLogger(__name__)

MAX_REENTRANCY = 64


class Subscription:
    def __init__(self, topics: Iterable[str], handler: str, callback: Callable[[Event], None]):
        self.topics = frozenset(validate_topic(t) for t in topics)
        self.handler = handler
        self.callback = callback
        self.cursors: dict[str, int] = {}
        self.active = True

    def _track(self, event: Event) -> bool:
        """Record delivery; False if the event was already delivered."""
        last = self.cursors.get(event.topic, 0)
        if event.seq is None or event.seq <= last:
            return False
        self.cursors[event.topic] = event.seq
        return True


class EventBus:
    """Shared bookkeeping for local transports."""

    synchronous = False

    def __init__(self, clock=None, ids: IdGenerator | None = None):
        self.clock = clock or SystemClock()
        self.ids = ids or IdGenerator()
        self._seqs: dict[str, int] = defaultdict(int)
        self._subs: list[Subscription] = []
        self._lock = threading.RLock()
        self._stopped = False
        self._allowed_payloads = set(PAYLOAD_TYPES)

    # -- schema registry -------------------------------------------------
    def restrict_payloads(self, tags: Iterable[str]) -> None:
        self._allowed_payloads = set(tags)

    def _check_payload(self, payload: Payload) -> None:
        if not isinstance(payload, Payload) or payload.TAG not in self._allowed_payloads:
            raise PayloadSchemaViolation(f"payload not allowed on this bus: {payload!r}")

    # -- publish/subscribe ----------------------------------------------
    def publish(self, topic: str, event: Event) -> int:
        """Assign the next seq for topic and deliver. Returns the seq."""
        validate_topic(topic)
        self._check_payload(event.payload)
        with self._lock:
            if self._stopped:
                raise BusStopped("bus is stopped")
            self._seqs[topic] += 1
            seq = self._seqs[topic]
            stamped = event.with_seq(seq)
            targets = [s for s in self._subs if s.active and topic in s.topics]
        self._deliver(stamped, targets)
        return seq

    def emit(self, topic: str, payload: Payload, source: str) -> int:
        """Build an event envelope around payload and publish it."""
        event = Event(
            id=self.ids.new_id(),
            topic=topic,
            source=source,
            timestamp=self.clock.timestamp(),
            payload=payload,
        )
        return self.publish(topic, event)

    def subscribe(self, topics, handler: str, callback: Callable[[Event], None]) -> Subscription:
        sub = Subscription(topics, handler, callback)
        with self._lock:
            if self._stopped:
                raise BusStopped("bus is stopped")
            for existing in self._subs:
                if existing.active and existing.handler == handler and existing.topics & sub.topics:
                    raise DuplicateHandlerOnTopic(
                        f"handler {handler!r} already subscribed on "
                        f"{sorted(existing.topics & sub.topics)}"
                    )
            self._subs.append(sub)
            self._on_subscribe(sub)
        return sub

    def unsubscribe(self, sub: Subscription) -> None:
        with self._lock:
            sub.active = False
            if sub in self._subs:
                self._subs.remove(sub)
            self._on_unsubscribe(sub)

    def stop(self) -> None:
        with self._lock:
            self._stopped = True
            subs = list(self._subs)
            self._subs.clear()
        for sub in subs:
            sub.active = False
            self._on_unsubscribe(sub)

    @property
    def stopped(self) -> bool:
        return self._stopped

    # -- transport hooks -------------------------------------------------
    def _deliver(self, event: Event, targets: list[Subscription]) -> None:
        raise NotImplementedError

    def _on_subscribe(self, sub: Subscription) -> None:
        pass

    def _on_unsubscribe(self, sub: Subscription) -> None:
        pass


class InlineEventBus(EventBus):
    """Synchronous depth-first delivery on the publisher's call stack.

    Single-threaded only. Feedback loops are allowed but capped, so a
    component publishing to its own input topic cannot recurse unboundedly.
    """

    synchronous = True

    def __init__(self, clock=None, ids=None):
        super().__init__(clock, ids)
        self._depth = 0

    def _deliver(self, event: Event, targets: list[Subscription]) -> None:
        if self._depth >= MAX_REENTRANCY:
            raise ReentrancyLimitExceeded(
                f"inline delivery exceeded depth {MAX_REENTRANCY} on topic {event.topic!r}"
            )
        self._depth += 1
        try:
            for sub in targets:
                if sub.active and sub._track(event):
                    sub.callback(event)
        finally:
            self._depth -= 1


class QueuedEventBus(EventBus):
    """One FIFO queue and one worker thread per subscription. Thread-safe."""

    def __init__(self, clock=None, ids=None):
        super().__init__(clock, ids)
        self._queues: dict[Subscription, queue.Queue] = {}
        self._threads: dict[Subscription, threading.Thread] = {}

    def _on_subscribe(self, sub: Subscription) -> None:
        q: queue.Queue = queue.Queue()
        self._queues[sub] = q
        t = threading.Thread(target=self._drain, args=(sub, q), daemon=True)
        self._threads[sub] = t
        t.start()

    def _on_unsubscribe(self, sub: Subscription) -> None:
        q = self._queues.pop(sub, None)
        t = self._threads.pop(sub, None)
        if q is not None:
            q.put(None)
        if t is not None and t is not threading.current_thread():
            t.join(timeout=5)

    def _deliver(self, event: Event, targets: list[Subscription]) -> None:
        with self._lock:
            for sub in targets:
                q = self._queues.get(sub)
                if q is not None:
                    q.put(event)

    def _drain(self, sub: Subscription, q: queue.Queue) -> None:
        while True:
            event = q.get()
            try:
                if event is None:
                    return
                if not (sub.active and sub._track(event)):
                    continue
                try:
                    sub.callback(event)
                except Exception:
                    logger.exception("subscriber %s failed on %s", sub.handler, event.topic)
            finally:
                q.task_done()

    def join(self, timeout: float = 5.0) -> None:
        """Wait until all subscription queues are empty (test helper)."""
        import time

        deadline = time.monotonic() + timeout
        while time.monotonic() < deadline:
            with self._lock:
                pending = any(q.unfinished_tasks for q in self._queues.values())
            if not pending:
                return
            time.sleep(0.002)
