"""Injectable clocks. All timestamps are integer epoch milliseconds."""

import itertools
import threading
import time


class SystemClock:
    def timestamp(self) -> int:
        return int(time.time() * 1000)


class FixedClock:
    """Returns a fixed start time, advancing by a fixed step on every call.

    Used for deterministic replay: two runs over the same event log see the
    identical sequence of timestamps.
    """

    def __init__(self, start_ms: int = 0, step_ms: int = 1):
        self._lock = threading.Lock()
        self._counter = itertools.count()
        self._start = start_ms
        self._step = step_ms

    def timestamp(self) -> int:
        with self._lock:
            return self._start + next(self._counter) * self._step

    def peek(self) -> int:
        """Current time without advancing."""
        with self._lock:
            # itertools.count has no peek; reconstruct from a probe counter
            probe = next(self._counter)
            self._counter = itertools.count(probe)
            return self._start + probe * self._step


class ManualClock:
    """Clock advanced explicitly by the test or replay harness."""

    def __init__(self, start_ms: int = 0):
        self._now = start_ms
        self._lock = threading.Lock()

    def timestamp(self) -> int:
        with self._lock:
            return self._now

    def advance(self, delta_ms: int) -> int:
        with self._lock:
            self._now += delta_ms
            return self._now

    def set(self, now_ms: int) -> None:
        with self._lock:
            self._now = max(self._now, now_ms)
