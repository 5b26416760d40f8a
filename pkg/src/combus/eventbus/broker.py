"""Self-contained remote broker: a single TCP process plus a client bus.

Wire protocol: length-prefixed JSON frames (see frames.py) with an "op" of
PUB, SUB, EVT, ACK or ERR. The broker assigns per-topic sequence numbers so
ordering stays centralized; clients reconnect with exponential backoff and
re-subscribe, with cursors reset to the topic head (no replay).
"""

import logging
import os
import queue
import socket
import threading
import time
from collections import defaultdict

from combus.eventbus.bus import EventBus, Subscription
from combus.eventbus.errors import BusError, BusStopped, MalformedFrame
from combus.eventbus.events import Event, event_from_json, event_to_json, validate_topic
from combus.eventbus.frames import encode_frame, read_frame

logger = logging.getLogger(__name__)

DEFAULT_PORT = 5995
BACKOFF_BASE = 0.1
BACKOFF_CAP = 5.0


def broker_address() -> tuple[str, int]:
    addr = os.environ.get("COMBUS_BROKER_ADDR", "")
    if addr:
        host, _, port = addr.rpartition(":")
        return host or "127.0.0.1", int(port)
    return "127.0.0.1", DEFAULT_PORT


class BrokerServer:
    """In-memory topic broker; at-most-once fan-out, no persistence."""

    def __init__(self, host: str = "127.0.0.1", port: int = 0):
        self._server = socket.create_server((host, port))
        self.host, self.port = self._server.getsockname()[:2]
        self._seqs: dict[str, int] = defaultdict(int)
        # socket -> (send lock, subscribed topics)
        self._clients: dict[socket.socket, tuple[threading.Lock, set[str]]] = {}
        self._lock = threading.Lock()
        self._running = False
        self._accept_thread: threading.Thread | None = None

    def start(self) -> "BrokerServer":
        self._running = True
        self._accept_thread = threading.Thread(target=self._accept_loop, daemon=True)
        self._accept_thread.start()
        return self

    def stop(self) -> None:
        self._running = False
        try:
            self._server.close()
        except OSError:
            pass
        with self._lock:
            clients = list(self._clients)
            self._clients.clear()
        for conn in clients:
            try:
                conn.close()
            except OSError:
                pass

    def _accept_loop(self) -> None:
        while self._running:
            try:
                conn, _ = self._server.accept()
            except OSError:
                return
            conn.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)
            with self._lock:
                self._clients[conn] = (threading.Lock(), set())
            threading.Thread(target=self._serve, args=(conn,), daemon=True).start()

    def _serve(self, conn: socket.socket) -> None:
        try:
            while self._running:
                try:
                    msg = read_frame(conn)
                except (MalformedFrame, BusError) as e:
                    self._send(conn, {"op": "ERR", "error": str(e)})
                    break
                if msg is None:
                    break
                self._dispatch(conn, msg)
        except OSError:
            pass
        finally:
            with self._lock:
                self._clients.pop(conn, None)
            try:
                conn.close()
            except OSError:
                pass

    def _dispatch(self, conn: socket.socket, msg: dict) -> None:
        op = msg.get("op")
        if op == "SUB":
            try:
                topic = validate_topic(msg.get("topic", ""))
            except BusError as e:
                self._send(conn, {"op": "ERR", "error": str(e), "ref": msg.get("ref")})
                return
            with self._lock:
                entry = self._clients.get(conn)
                if entry:
                    entry[1].add(topic)
            self._send(conn, {"op": "ACK", "topic": topic, "ref": msg.get("ref")})
        elif op == "PUB":
            try:
                topic = validate_topic(msg.get("topic", ""))
                event = event_from_json(msg["event"])
            except (BusError, KeyError, TypeError) as e:
                self._send(conn, {"op": "ERR", "error": str(e), "ref": msg.get("ref")})
                return
            # Assign seq and fan out under one lock to keep per-topic FIFO.
            with self._lock:
                self._seqs[topic] += 1
                seq = self._seqs[topic]
                stamped = event.with_seq(seq)
                frame = {"op": "EVT", "topic": topic, "event": event_to_json(stamped)}
                targets = [c for c, (_, topics) in self._clients.items() if topic in topics]
                for target in targets:
                    self._send(target, frame)
            self._send(conn, {"op": "ACK", "topic": topic, "seq": seq, "ref": msg.get("ref")})
        else:
            self._send(conn, {"op": "ERR", "error": f"unknown op {op!r}", "ref": msg.get("ref")})

    def _send(self, conn: socket.socket, obj: dict) -> None:
        entry = self._clients.get(conn)
        lock = entry[0] if entry else threading.Lock()
        try:
            with lock:
                conn.sendall(encode_frame(obj))
        except OSError:
            pass


class RemoteEventBus(EventBus):
    """Client-side bus speaking the broker protocol.

    A receiver thread routes ACKs and queues EVT frames; a separate
    dispatcher thread runs subscriber callbacks so a callback may publish
    (and wait for its ACK) without deadlocking the receiver.
    """

    def __init__(self, host: str | None = None, port: int | None = None, clock=None, ids=None):
        super().__init__(clock, ids)
        default_host, default_port = broker_address()
        self.host = host or default_host
        self.port = port or default_port
        self._sock: socket.socket | None = None
        self._send_lock = threading.Lock()
        self._acks: dict[str, queue.Queue] = {}
        self._events: queue.Queue = queue.Queue()
        self._recv_thread: threading.Thread | None = None
        self._dispatch_thread: threading.Thread | None = None
        self._ref_counter = 0

    # -- lifecycle -------------------------------------------------------
    def start(self) -> "RemoteEventBus":
        self._connect()
        self._recv_thread = threading.Thread(target=self._recv_loop, daemon=True)
        self._recv_thread.start()
        self._dispatch_thread = threading.Thread(target=self._dispatch_loop, daemon=True)
        self._dispatch_thread.start()
        return self

    def stop(self) -> None:
        super().stop()
        self._events.put(None)
        sock, self._sock = self._sock, None
        if sock is not None:
            try:
                sock.shutdown(socket.SHUT_RDWR)
            except OSError:
                pass
            try:
                sock.close()
            except OSError:
                pass
        for t in (self._recv_thread, self._dispatch_thread):
            if t is not None and t is not threading.current_thread():
                t.join(timeout=5)

    def _connect(self) -> None:
        sock = socket.create_connection((self.host, self.port))
        sock.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)
        self._sock = sock

    def _reconnect(self) -> bool:
        backoff = BACKOFF_BASE
        while not self.stopped:
            try:
                self._connect()
            except OSError:
                time.sleep(backoff)
                backoff = min(backoff * 2, BACKOFF_CAP)
                continue
            # Re-establish subscriptions; cursors reset to head (no replay).
            with self._lock:
                subs = list(self._subs)
            for sub in subs:
                sub.cursors.clear()
                for topic in sub.topics:
                    self._request({"op": "SUB", "topic": topic}, wait=False)
            return True
        return False

    # -- protocol --------------------------------------------------------
    def _request(self, msg: dict, wait: bool = True) -> dict | None:
        with self._send_lock:
            self._ref_counter += 1
            ref = f"r{self._ref_counter}"
        msg["ref"] = ref
        ack_queue: queue.Queue = queue.Queue()
        if wait:
            self._acks[ref] = ack_queue
        sock = self._sock
        if sock is None:
            raise BusStopped("remote bus not connected")
        try:
            with self._send_lock:
                sock.sendall(encode_frame(msg))
        except OSError as e:
            self._acks.pop(ref, None)
            raise BusStopped(f"broker connection lost: {e}") from e
        if not wait:
            return None
        try:
            reply = ack_queue.get(timeout=10)
        finally:
            self._acks.pop(ref, None)
        if reply.get("op") == "ERR":
            raise BusError(reply.get("error", "broker error"))
        return reply

    def _recv_loop(self) -> None:
        while not self.stopped:
            sock = self._sock
            if sock is None:
                return
            try:
                msg = read_frame(sock)
            except (OSError, BusError):
                msg = None
            if msg is None:
                if self.stopped or not self._reconnect():
                    return
                continue
            op = msg.get("op")
            if op in ("ACK", "ERR") and msg.get("ref") in self._acks:
                self._acks[msg["ref"]].put(msg)
            elif op == "EVT":
                self._events.put(msg)

    def _dispatch_loop(self) -> None:
        while True:
            msg = self._events.get()
            if msg is None:
                return
            try:
                event = event_from_json(msg["event"])
            except (BusError, KeyError):
                logger.warning("dropping malformed EVT frame")
                continue
            with self._lock:
                targets = [s for s in self._subs if s.active and event.topic in s.topics]
            for sub in targets:
                if sub._track(event):
                    try:
                        sub.callback(event)
                    except Exception:
                        logger.exception("subscriber %s failed on %s", sub.handler, event.topic)

    # -- EventBus interface ----------------------------------------------
    def publish(self, topic: str, event: Event) -> int:
        validate_topic(topic)
        self._check_payload(event.payload)
        if self.stopped:
            raise BusStopped("bus is stopped")
        reply = self._request({"op": "PUB", "topic": topic, "event": event_to_json(event)})
        return reply["seq"]

    def _on_subscribe(self, sub: Subscription) -> None:
        for topic in sub.topics:
            self._request({"op": "SUB", "topic": topic})

    def _deliver(self, event, targets) -> None:  # delivery handled by broker
        raise NotImplementedError

    def join(self, timeout: float = 5.0) -> None:
        """Wait until the local dispatch queue is empty (test helper)."""
        deadline = time.monotonic() + timeout
        while time.monotonic() < deadline and not self._events.empty():
            time.sleep(0.002)
        time.sleep(0.01)
