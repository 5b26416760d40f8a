"""Agent assembly and lifecycle."""

import logging
import warnings
from pathlib import Path

from combus.audio.asr import TranscriptLookup
from combus.audio.speaker_id import VoiceRegistry
from combus.audio.wav import read_wav
from combus.clock import FixedClock, ManualClock, SystemClock
from combus.ekg.graph import EpisodicKnowledgeGraph
from combus.emissor.store import ScenarioStore
from combus.eventbus.broker import RemoteEventBus, broker_address
from combus.eventbus.bus import InlineEventBus, QueuedEventBus
from combus.eventbus.events import (
    SignalData,
    SignalStarted,
    SignalStopped,
    TextSignalEvent,
    event_to_json,
)
from combus.ids import IdGenerator
from combus.intentions import load_intention_config, register_builtin_intentions
from combus.runtime.config import FEEDER_TOPICS, AgentConfig
from combus.text.mentions import Gazetteer
from combus.vision import FaceRegistry, load_sidecar

logger = logging.getLogger(__name__)

FEED_CHUNK_MS = 100


class UnknownComponent(Exception):
    pass


class DanglingTopic(UserWarning):
    pass


class Agent:
    def __init__(self, config: AgentConfig, clock=None, ids=None):
        self.config = config
        self.name = config.name
        self.speaker = config.speaker
        self.clock = clock or _make_clock(config)
        self.ids = ids or IdGenerator(deterministic=config.clock_type != "real")
        self.bus = _make_bus(config, self.clock, self.ids)
        self.store = ScenarioStore(config.storage_dir, self.clock, self.ids)
        self.ekg = EpisodicKnowledgeGraph()
        self.gazetteer = Gazetteer()
        self.transcripts = TranscriptLookup()
        self.voices = VoiceRegistry()
        self.faces = FaceRegistry.load()
        intention_config = (load_intention_config(config.intentions_config)
                           if config.intentions_config else load_intention_config())
        self.manager = register_builtin_intentions(
            intention_config, initial=config.intentions_initial or None)

        self.scenario = None
        self.context_id = None
        self.chat_id = "1"
        self._turn = 0
        self.perceptions = []       # (timestamp_ms, label)
        self.mic_muted = False
        self.tts_playing = 0
        self.consent = config.consent == "granted"
        self.shutdown_requested = False
        self.workers = {}
        self.input_log = []
        self._recorder = None

    # -- wiring ----------------------------------------------------------
    def gate(self, component: str, topic: str) -> bool:
        return self.manager.gate(component, topic)

    def next_turn(self) -> int:
        turn = self._turn
        self._turn += 1
        return turn

    # earlier subscribers see each event first on the inline bus: the
    # intention manager must gate before consumers run, and the storage
    # writer must persist a signal before mentions referencing it arrive
    _EARLY = {"intention-manager": 0, "storage-writer": 1}

    def _worker_order(self):
        names = list(self.workers)
        names.sort(key=lambda n: self._EARLY.get(n, 2))
        return names

    def start(self) -> "Agent":
        for name in self._worker_order():
            self.workers[name].start()
        if self.consent and self.scenario is None:
            self.start_session()
        return self

    def stop(self) -> None:
        self.finish_scenario()
        if hasattr(self.bus, "join"):
            try:
                self.bus.join(timeout=5.0)
            except Exception:
                pass
        for name in reversed(self._worker_order()):
            self.workers[name].stop()
        self.bus.stop()

    # -- session ---------------------------------------------------------
    def start_session(self) -> None:
        self.scenario = self.store.start_scenario(self.name, self.speaker)
        self.context_id = self.ekg.init_context(self.scenario.id,
                                                self.clock.timestamp())

    def finish_scenario(self) -> None:
        if self.scenario is not None and not self.scenario.ruler.closed:
            self.store.finish_scenario(self.scenario)
        elif self.scenario is not None:
            self.store.checkpoint(self.scenario)

    def flush(self) -> None:
        if self.scenario is not None:
            self.store.checkpoint(self.scenario)

    def request_shutdown(self) -> None:
        self.shutdown_requested = True

    def forget_session(self) -> None:
        """Consent denied: remove the scenario directory and the eKG context."""
        if self.scenario is not None:
            self.store.delete_scenario(self.scenario.id)
            self.scenario = None
        if self.context_id is not None:
            self.ekg.delete_context(self.context_id)
            self.context_id = None

    def save_ekg(self, path=None) -> Path:
        path = Path(path) if path else self.store.root / "ekg.nq"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.ekg.serialize(), "utf-8")
        return path

    # -- feeders ---------------------------------------------------------
    def record_inputs(self) -> None:
        """Log feeder events for later replay."""
        if self._recorder is None:
            self._recorder = self.bus.subscribe(
                sorted(FEEDER_TOPICS), "input-recorder",
                lambda event: self.input_log.append(event_to_json(event)))

    def feed_text(self, text: str, source: str = "chat-ui") -> None:
        self.bus.emit("text-in", TextSignalEvent(signal={
            "id": self.ids.new_id(), "text": text, "speaker": self.speaker,
        }), source)

    def feed_wav(self, path, source: str = "mic") -> str | None:
        """Publish one WAV fixture as a chunked mic signal; honors muting."""
        path = Path(path)
        samples = read_wav(path.read_bytes())
        voice = None
        sidecar = path.with_suffix(path.suffix + ".voice.json")
        if sidecar.exists():
            import json
            voice = json.loads(sidecar.read_text("utf-8"))
        if self.mic_muted:
            return None
        ref = self.ids.new_id()
        start = self.clock.timestamp()
        self.bus.emit("mic", SignalStarted(signal_ref=ref, modality="audio"), source)
        step = FEED_CHUNK_MS * 32  # bytes per chunk at 16 kHz PCM16
        offset_ms = 0
        first = True
        for i in range(0, len(samples), step):
            self._advance(FEED_CHUNK_MS)
            if self.mic_muted:
                offset_ms += FEED_CHUNK_MS
                continue
            chunk = {"data": samples[i:i + step].hex(),
                     "start_ms": start + offset_ms,
                     "end_ms": start + offset_ms + FEED_CHUNK_MS}
            if first and voice is not None:
                chunk["voice"] = voice
            first = False
            self.bus.emit("mic", SignalData(signal_ref=ref, chunk=chunk), source)
            offset_ms += FEED_CHUNK_MS
        self.bus.emit("mic", SignalStopped(signal_ref=ref), source)
        return ref

    def feed_image(self, path, dims=None, source: str = "cam") -> str:
        path = Path(path)
        sidecar = load_sidecar(path)
        dims = dims or sidecar.get("dims")
        ref = self.ids.new_id()
        self.bus.emit("cam", SignalStarted(signal_ref=ref, modality="image"), source)
        self.bus.emit("cam", SignalData(signal_ref=ref, chunk={
            "path": str(path), "dims": dims}), source)
        self.bus.emit("cam", SignalStopped(signal_ref=ref), source)
        return ref

    def _advance(self, ms: int) -> None:
        if isinstance(self.clock, ManualClock):
            self.clock.advance(ms)


def _make_clock(config: AgentConfig):
    if config.clock_type == "fixed":
        return FixedClock(config.clock_start_ms, config.clock_step_ms)
    if config.clock_type == "manual":
        return ManualClock(config.clock_start_ms)
    return SystemClock()


def _make_bus(config: AgentConfig, clock, ids):
    if config.bus_type == "queued":
        return QueuedEventBus(clock, ids)
    if config.bus_type == "remote":
        if config.broker:
            host, _, port = config.broker.partition(":")
            return RemoteEventBus(host, int(port or 5995), clock=clock, ids=ids)
        host, port = broker_address()
        return RemoteEventBus(host, port, clock=clock, ids=ids)
    return InlineEventBus(clock, ids)


def assemble(config: AgentConfig, clock=None, ids=None) -> Agent:
    """Build an agent: bus, components, intention manager, storage writer."""
    from combus.runtime.components import COMPONENTS

    agent = Agent(config, clock=clock, ids=ids)
    for name, cc in config.components.items():
        builder = COMPONENTS.get(name)
        if builder is None:
            raise UnknownComponent(name)
        agent.workers[name] = builder(agent, cc)
    for component_name, topic in config.dangling_topics():
        warnings.warn(f"input topic {topic!r} of {component_name!r} has no producer",
                      DanglingTopic, stacklevel=2)
    return agent
