"""Id minting, with a deterministic mode for replay."""

import threading
import uuid


class IdGenerator:
    """Random 128-bit hex ids (default) or a deterministic counter sequence.

    Deterministic mode makes signal/event/scenario ids reproducible so that
    replaying a recorded session yields byte-identical output files.
    """

    def __init__(self, deterministic: bool = False, prefix: str = ""):
        self._deterministic = deterministic
        self._prefix = prefix
        self._counter = 0
        self._lock = threading.Lock()

    def new_id(self) -> str:
        if not self._deterministic:
            return uuid.uuid4().hex
        with self._lock:
            self._counter += 1
            return f"{self._prefix}{self._counter:032x}"
