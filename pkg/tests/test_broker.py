import random
import string

import pytest

from combus.clock import ManualClock
from combus.eventbus import (
    CapsuleEvent,
    ControlCommand,
    Event,
    IntentionChanged,
    MentionCreated,
    SignalData,
    SignalStarted,
    SignalStopped,
    TextSignalEvent,
    ThoughtsEvent,
)
from combus.eventbus.errors import FrameTooLarge, MalformedFrame, UnknownPayloadTag
from combus.eventbus.frames import (
    broker_frame_decode,
    broker_frame_encode,
    decode_frame,
    encode_frame,
)
from combus.eventbus.broker import BrokerServer, RemoteEventBus
from combus.ids import IdGenerator


def make_event(payload, topic="text-in", seq=3):
    return Event(id="ab" * 16, topic=topic, source="test", timestamp=1234, payload=payload, seq=seq)


def test_roundtrip_text_event():
    event = make_event(TextSignalEvent(signal={"text": "hello", "id": "s1"}))
    assert broker_frame_decode(broker_frame_encode(event)) == event


def test_header_declares_body_length():
    event = make_event(TextSignalEvent(signal={"text": ""}))
    frame = broker_frame_encode(event)
    declared = int.from_bytes(frame[:4], "big")
    assert declared == len(frame) - 4


def test_malformed_frames():
    with pytest.raises(MalformedFrame):
        decode_frame(b"\x00\x00")
    with pytest.raises(MalformedFrame):
        decode_frame(b"\x00\x00\x00\x05ab")
    with pytest.raises(MalformedFrame):
        decode_frame(b"\x00\x00\x00\x02[]")
    with pytest.raises(FrameTooLarge):
        decode_frame((17 * 1024 * 1024).to_bytes(4, "big") + b"x")


def test_unknown_payload_tag():
    frame = encode_frame(
        {"id": "a", "topic": "t", "seq": 1, "source": "s", "timestamp": 0,
         "payload": {"type": "Nonsense"}}
    )
    with pytest.raises(UnknownPayloadTag):
        broker_frame_decode(frame)


def random_event(rng):
    def rand_str(n=8):
        return "".join(rng.choice(string.ascii_lowercase) for _ in range(n))

    payloads = [
        lambda: SignalStarted(signal_ref=rand_str(), modality=rng.choice(["audio", "text"])),
        lambda: SignalData(signal_ref=rand_str(), chunk={"data": rand_str(32), "start_ms": rng.randrange(10**6)}),
        lambda: SignalStopped(signal_ref=rand_str()),
        lambda: MentionCreated(mention={"id": rand_str(), "segments": [{"start_ms": 1, "end_ms": 2}]}),
        lambda: TextSignalEvent(signal={"id": rand_str(), "text": rand_str(20)}),
        lambda: CapsuleEvent(capsule={"chat_id": rand_str(), "turn_id": rng.randrange(50)}),
        lambda: ThoughtsEvent(thoughts={"thoughts": [{"kind": "novelty", "iri": rand_str()}]}),
        lambda: IntentionChanged(intention=rand_str()),
        lambda: ControlCommand(command=rng.choice(["mute", "unmute", "shutdown"])),
    ]
    return Event(
        id=f"{rng.getrandbits(128):032x}",
        topic=rand_str(),
        source=rand_str(4),
        timestamp=rng.randrange(10**12),
        payload=rng.choice(payloads)(),
        seq=rng.randrange(1, 10**6),
    )


def test_codec_fuzz_100_events_bit_identical():
    rng = random.Random(7)
    for _ in range(100):
        event = random_event(rng)
        frame = broker_frame_encode(event)
        decoded = broker_frame_decode(frame)
        assert decoded == event
        assert broker_frame_encode(decoded) == frame


class TestRemoteBus:
    @pytest.fixture
    def broker(self):
        server = BrokerServer().start()
        yield server
        server.stop()

    def make_client(self, broker):
        return RemoteEventBus(
            host=broker.host, port=broker.port,
            clock=ManualClock(0), ids=IdGenerator(deterministic=True),
        ).start()

    def test_pub_sub_roundtrip(self, broker):
        pub = self.make_client(broker)
        sub = self.make_client(broker)
        got = []
        sub.subscribe({"text-in"}, "sink", got.append)
        assert pub.emit("text-in", TextSignalEvent(signal={"text": "hi"}), "t") == 1
        sub.join()
        assert [e.payload.signal["text"] for e in got] == ["hi"]
        pub.stop()
        sub.stop()

    def test_per_topic_fifo_across_broker(self, broker):
        pub = self.make_client(broker)
        sub = self.make_client(broker)
        got = []
        sub.subscribe({"hot"}, "sink", got.append)
        for i in range(200):
            pub.emit("hot", TextSignalEvent(signal={"text": str(i)}), "t")
        sub.join()
        assert [e.seq for e in got] == list(range(1, 201))
        pub.stop()
        sub.stop()

    def test_no_replay_for_late_subscriber(self, broker):
        pub = self.make_client(broker)
        pub.emit("hot", TextSignalEvent(signal={"text": "old"}), "t")
        sub = self.make_client(broker)
        got = []
        sub.subscribe({"hot"}, "sink", got.append)
        pub.emit("hot", TextSignalEvent(signal={"text": "new"}), "t")
        sub.join()
        assert [e.payload.signal["text"] for e in got] == ["new"]
        pub.stop()
        sub.stop()
