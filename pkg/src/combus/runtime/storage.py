"""The single writer of EMISSOR scenario data.

Subscribes to all signal and mention topics; nothing else in the agent
mutates scenario files.
"""

import logging
from pathlib import Path

from combus.emissor.model import Annotation, Mention, Signal, TemporalRuler, TextIndex

logger = logging.getLogger(__name__)

AUDIO_TOPICS = {"mic", "vad", "speaker"}
IMAGE_TOPICS = {"cam"}
TEXT_TOPICS = {"text-in", "text-out"}
TEXT_MENTION_TOPICS = {"linking"}
IMAGE_MENTION_TOPICS = {"face", "object"}
RDF_TOPICS = {"triples", "identity"}


class StorageWriter:
    def __init__(self, agent):
        self.agent = agent
        self._buffers = {}  # signal_ref -> open audio/image buffer

    def process(self, event):
        if self.agent.scenario is None:
            return None
        p = event.payload
        topic = event.topic
        if topic in TEXT_TOPICS and p.TAG == "TextSignalEvent":
            self._write_text(event)
        elif topic in AUDIO_TOPICS:
            self._buffer_media(event, "audio")
        elif topic in IMAGE_TOPICS:
            self._buffer_media(event, "image")
        elif topic in TEXT_MENTION_TOPICS and p.TAG == "MentionCreated":
            self._write_text_mentions(event)
        elif topic in IMAGE_MENTION_TOPICS and p.TAG == "MentionCreated":
            self._write_image_mention(event)
        elif topic in RDF_TOPICS and p.TAG == "CapsuleEvent":
            self._write_rdf(event)
        return None

    # -- text ------------------------------------------------------------
    def _write_text(self, event):
        signal = event.payload.signal
        if "id" not in signal or "text" not in signal:
            return
        start = signal.get("start_ms", event.timestamp)
        end = signal.get("end_ms", event.timestamp)
        self.agent.store.add_signal(self.agent.scenario, Signal(
            id=signal["id"], modality="text",
            time=TemporalRuler(self.agent.scenario.id, start, end),
            source=event.source, text=signal["text"],
        ))

    def _write_text_mentions(self, event):
        m = event.payload.mention
        signal_id = m.get("signal_id")
        if not signal_id or self.agent.scenario.find_signal(signal_id) is None:
            return
        for n, item in enumerate(m.get("items", [])):
            annotations = [Annotation("entity", {"label": item["label"],
                                                 "type": item["type"]},
                                      event.source, event.timestamp)]
            if item.get("iri"):
                annotations.append(Annotation("identity", {"iri": item["iri"]},
                                              event.source, event.timestamp))
            self.agent.store.add_mention(self.agent.scenario, signal_id, Mention(
                id=f"{m['id']}-{n}",
                segments=[TextIndex(signal_id, item["start"], item["stop"])],
                annotations=annotations,
            ))

    # -- audio / image ---------------------------------------------------
    def _buffer_media(self, event, modality):
        p = event.payload
        if p.TAG == "SignalStarted":
            self._buffers[p.signal_ref] = {
                "modality": modality, "start": event.timestamp,
                "samples": bytearray(), "path": None, "dims": None,
            }
        elif p.TAG == "SignalData" and p.signal_ref in self._buffers:
            entry = self._buffers[p.signal_ref]
            if "data" in p.chunk:
                entry["samples"] += bytes.fromhex(p.chunk["data"])
            if "path" in p.chunk:
                entry["path"] = p.chunk["path"]
            if "dims" in p.chunk:
                entry["dims"] = list(p.chunk["dims"])
            if "start_ms" in p.chunk:
                entry["start"] = min(entry["start"], p.chunk["start_ms"])
            entry["end"] = p.chunk.get("end_ms")
        elif p.TAG == "SignalStopped" and p.signal_ref in self._buffers:
            entry = self._buffers.pop(p.signal_ref)
            self._flush_media(event, entry)

    def _flush_media(self, event, entry):
        from combus.audio.wav import duration_ms, write_wav

        media = None
        dims = None
        if entry["modality"] == "audio":
            samples = bytes(entry["samples"])
            media = write_wav(samples)
            end = entry.get("end") or entry["start"] + duration_ms(samples)
        else:
            if entry["path"]:
                try:
                    media = Path(entry["path"]).read_bytes()
                except OSError:
                    logger.warning("image file missing: %s", entry["path"])
                    return
            dims = entry["dims"]
            end = entry.get("end") or event.timestamp
        self.agent.store.add_signal(self.agent.scenario, Signal(
            id=event.payload.signal_ref, modality=entry["modality"],
            time=TemporalRuler(self.agent.scenario.id, entry["start"], end),
            source=event.source, dims=dims,
        ), media=media)

    def _write_image_mention(self, event):
        m = event.payload.mention
        plain = {"id": m["id"], "segments": m.get("segments", []),
                 "annotations": m.get("annotations", [])}
        try:
            mention = Mention.from_dict(plain)
        except (KeyError, ValueError):
            return
        if not mention.segments:
            return
        signal_id = mention.segments[0].signal_id
        if self.agent.scenario.find_signal(signal_id) is None:
            return
        self.agent.store.add_mention(self.agent.scenario, signal_id, mention)

    # -- rdf -------------------------------------------------------------
    def _write_rdf(self, event):
        capsule = event.payload.capsule
        self.agent.store.add_signal(self.agent.scenario, Signal(
            id=event.id, modality="rdf",
            time=TemporalRuler(self.agent.scenario.id, event.timestamp,
                               event.timestamp),
            source=event.source, data=dict(capsule),
        ))
