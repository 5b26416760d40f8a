"""Component factories: each builds a TopicWorker wired into an Agent."""

from combus.audio import asr as asr_mod
from combus.audio import tts as tts_mod
from combus.audio.speaker_id import VoiceRegistry, identify_speaker
from combus.audio.vad import VadConfig, detect_speech
from combus.ekg.capsules import ClaimCapsule, PerceptionCapsule, Perspective, TripleTerm
from combus.eventbus.events import (
    CapsuleEvent,
    ControlCommand,
    MentionCreated,
    SignalData,
    SignalStarted,
    SignalStopped,
    TextSignalEvent,
    ThoughtsEvent,
)
from combus.eventbus.worker import Routed, TopicWorker
from combus.intentions import load_intention_config
from combus.text import (
    ElizaEngine,
    Query,
    TextMention,
    UnrecognizedQuestion,
    detect_mentions,
    extract_query,
    extract_triples,
    link_mentions,
    to_capsule,
    tokenize,
    is_question,
    verbalize_answer,
    verbalize_thoughts,
)
from combus.text.nlg import answer_query
from combus.vision import FaceRegistry, detect_faces, detect_objects, identify_face, load_sidecar

COMPONENTS = {}


def component(name):
    def register(builder):
        COMPONENTS[name] = builder
        return builder
    return register


def _worker(agent, cc, processor):
    return TopicWorker(cc.name, agent.bus, cc.input_topics, processor,
                       cc.output_topics, gate=agent.gate)


# -- audio path ----------------------------------------------------------

@component("vad")
def build_vad(agent, cc):
    vad_config = VadConfig(
        rms_threshold=float(cc.params.get("rms_threshold", 0.02)),
        min_speech_ms=int(cc.params.get("min_speech_ms", 200)),
        padding_ms=int(cc.params.get("padding_ms", 100)),
    )
    buffers = {}

    def process(event):
        p = event.payload
        if p.TAG == "SignalStarted" and p.modality == "audio":
            buffers[p.signal_ref] = {"samples": bytearray(), "start_ms": event.timestamp}
        elif p.TAG == "SignalData" and p.signal_ref in buffers:
            buffers[p.signal_ref]["samples"] += bytes.fromhex(p.chunk.get("data", ""))
            if "start_ms" in p.chunk:
                entry = buffers[p.signal_ref]
                entry["start_ms"] = min(entry["start_ms"],
                                        p.chunk["start_ms"])
        elif p.TAG == "SignalStopped" and p.signal_ref in buffers:
            entry = buffers.pop(p.signal_ref)
            samples = bytes(entry["samples"])
            out = []
            for start_ms, end_ms in detect_speech(samples, vad_config):
                ref = agent.ids.new_id()
                chunk = samples[start_ms * 32: end_ms * 32]  # 16 kHz PCM16: 32 B/ms
                out.append(SignalStarted(signal_ref=ref, modality="audio"))
                out.append(SignalData(signal_ref=ref, chunk={
                    "data": chunk.hex(),
                    "start_ms": entry["start_ms"] + start_ms,
                    "end_ms": entry["start_ms"] + end_ms,
                    "source_ref": p.signal_ref,
                }))
                out.append(SignalStopped(signal_ref=ref))
            return out
        return None

    return _worker(agent, cc, process)


@component("asr")
def build_asr(agent, cc):
    if "transcripts" in cc.params:
        lookup = asr_mod.TranscriptLookup.load(cc.params["transcripts"])
    else:
        lookup = agent.transcripts
    buffers = {}

    def process(event):
        p = event.payload
        if p.TAG == "SignalData":
            buffers.setdefault(p.signal_ref, {"samples": bytearray()})
            buffers[p.signal_ref]["samples"] += bytes.fromhex(p.chunk.get("data", ""))
            buffers[p.signal_ref].update(
                {k: p.chunk[k] for k in ("start_ms", "end_ms") if k in p.chunk})
        elif p.TAG == "SignalStopped" and p.signal_ref in buffers:
            entry = buffers.pop(p.signal_ref)
            text, certainty = lookup.transcribe(bytes(entry["samples"]))
            return TextSignalEvent(signal={
                "id": agent.ids.new_id(),
                "text": text,
                "certainty": certainty,
                "speaker": agent.speaker,
                "signal_ref": p.signal_ref,
                "start_ms": entry.get("start_ms", event.timestamp),
                "end_ms": entry.get("end_ms", event.timestamp),
            })
        return None

    return _worker(agent, cc, process)


@component("tts")
def build_tts(agent, cc):
    topic = cc.output_topics[0] if cc.output_topics else "speaker"

    def process(event):
        p = event.payload
        if p.TAG != "TextSignalEvent":
            return None
        text = p.signal.get("text", "")
        samples = tts_mod.synthesize(text)
        duration = tts_mod.speech_duration_ms(text)
        ref = agent.ids.new_id()
        # emitted directly so playback occupies virtual time: the stop
        # event lands duration_ms after the start on a manual clock
        agent.bus.emit(topic, SignalStarted(signal_ref=ref, modality="audio"),
                       cc.name)
        agent.bus.emit(topic, SignalData(signal_ref=ref, chunk={
            "data": samples.hex(), "duration_ms": duration, "text": text,
        }), cc.name)
        agent._advance(duration)
        agent.bus.emit(topic, SignalStopped(signal_ref=ref), cc.name)
        return None

    return _worker(agent, cc, process)


@component("audio-controller")
def build_audio_controller(agent, cc):
    def process(event):
        p = event.payload
        if p.TAG == "SignalStarted":
            agent.tts_playing += 1
            if agent.tts_playing == 1:
                agent.mic_muted = True
                return ControlCommand(command="mute")
        elif p.TAG == "SignalStopped":
            agent.tts_playing = max(0, agent.tts_playing - 1)
            if agent.tts_playing == 0:
                agent.mic_muted = False
                return ControlCommand(command="unmute")
        return None

    return _worker(agent, cc, process)


@component("speaker-id")
def build_speaker_id(agent, cc):
    if "voices" in cc.params:
        registry = VoiceRegistry.load(cc.params["voices"])
    else:
        registry = agent.voices
    pending = {}

    def process(event):
        p = event.payload
        if p.TAG == "SignalData" and "voice" in p.chunk:
            pending[p.signal_ref] = p.chunk["voice"]
        elif p.TAG == "SignalStopped" and p.signal_ref in pending:
            vector = pending.pop(p.signal_ref)
            match = identify_speaker(vector, registry)
            return MentionCreated(mention={
                "id": agent.ids.new_id(),
                "kind": "speaker",
                "signal_ref": p.signal_ref,
                "vector": vector,
                "match": match,
            })
        return None

    return _worker(agent, cc, process)


# -- text path -----------------------------------------------------------

@component("eliza")
def build_eliza(agent, cc):
    engine = ElizaEngine.load(cc.params["rules"]) if "rules" in cc.params \
        else ElizaEngine()

    def process(event):
        p = event.payload
        if p.TAG != "TextSignalEvent":
            return None
        return TextSignalEvent(signal={
            "id": agent.ids.new_id(),
            "text": engine.respond(p.signal.get("text", "")),
            "speaker": agent.name,
        })

    return _worker(agent, cc, process)


_PRONOUN_MENTIONS = {"i", "you"}


@component("mention-detector")
def build_mention_detector(agent, cc):
    def process(event):
        p = event.payload
        if p.TAG != "TextSignalEvent" or "text" not in p.signal:
            return None
        text = p.signal["text"]
        speaker = p.signal.get("speaker") or agent.speaker
        items = [
            {"label": m.label, "type": m.type, "start": m.start, "stop": m.stop}
            for m in detect_mentions(text, agent.gazetteer)
        ]
        spans = {(item["start"], item["stop"]) for item in items}
        for token in tokenize(text):
            if token.text in _PRONOUN_MENTIONS and (token.start, token.stop) not in spans:
                items.append({"label": token.raw, "type": "person",
                              "start": token.start, "stop": token.stop,
                              "pronoun": True})
        return MentionCreated(mention={
            "id": agent.ids.new_id(),
            "signal_id": p.signal.get("id"),
            "utterance": text,
            "speaker": speaker,
            "chat_id": agent.chat_id,
            "turn": agent.next_turn(),
            "items": sorted(items, key=lambda i: i["start"]),
        })

    return _worker(agent, cc, process)


@component("mention-linker")
def build_mention_linker(agent, cc):
    def process(event):
        p = event.payload
        if p.TAG != "MentionCreated":
            return None
        m = dict(p.mention)
        utterance_iri = (f"leolaniTalk:chat{m.get('chat_id', '1')}"
                         f"_utterance{m.get('turn', 0)}")
        mentions = [TextMention(i["label"], i["type"], i["start"], i["stop"])
                    for i in m.get("items", [])]
        results = link_mentions(mentions, m.get("speaker", agent.speaker),
                                agent.ekg, agent=agent.name,
                                utterance_iri=utterance_iri)
        items = []
        for item, result in zip(m.get("items", []), results):
            linked = dict(item)
            linked["iri"] = result.iri
            if result.clarification:
                linked["clarification"] = result.clarification
            items.append(linked)
        m["items"] = items
        return MentionCreated(mention=m)

    return _worker(agent, cc, process)


@component("triple-extractor")
def build_triple_extractor(agent, cc):
    # first output topic carries capsules; anything without a triple or query
    # is routed to the chitchat topic for the fallback chatbot
    triples_topic = cc.output_topics[0] if cc.output_topics else "triples"
    chitchat_topic = cc.params.get("chitchat_topic",
                                   cc.output_topics[1] if len(cc.output_topics) > 1
                                   else "chitchat")

    def process(event):
        p = event.payload
        if p.TAG != "MentionCreated":
            return None
        m = p.mention
        text = m.get("utterance", "")
        speaker = m.get("speaker", agent.speaker)
        base = {"chat_id": m.get("chat_id", agent.chat_id),
                "turn": m.get("turn", 0),
                "utterance": text, "speaker": speaker,
                "timestamp": event.timestamp}

        for item in m.get("items", []):
            if item.get("clarification"):
                return Routed(triples_topic, CapsuleEvent(capsule={
                    "type": "clarification", "text": item["clarification"], **base}))

        if is_question(text):
            try:
                query = extract_query(text, speaker, agent=agent.name,
                                      gazetteer=agent.gazetteer)
            except UnrecognizedQuestion:
                return Routed(triples_topic, CapsuleEvent(capsule={
                    "type": "clarification",
                    "text": UnrecognizedQuestion.RESPONSE, **base}))
            return Routed(triples_topic, CapsuleEvent(capsule={
                "type": "query",
                "query": {"subject": query.subject, "predicate": query.predicate,
                          "object": query.object, "yes_no": query.yes_no},
                **base}))

        triples = extract_triples(text, speaker, agent=agent.name,
                                  gazetteer=agent.gazetteer)
        if not triples:
            return Routed(chitchat_topic, TextSignalEvent(signal={
                "id": agent.ids.new_id(), "text": text, "speaker": speaker}))
        capsule = to_capsule(triples[0], chat_id=base["chat_id"],
                             turn_id=base["turn"], author=speaker, utterance=text,
                             context_id=agent.context_id,
                             timestamp=event.timestamp)
        return Routed(triples_topic,
                      CapsuleEvent(capsule={"type": "statement", **capsule.to_dict()}))

    return _worker(agent, cc, process)


@component("knowledge-rep")
def build_knowledge_rep(agent, cc):
    def process(event):
        p = event.payload
        if p.TAG != "CapsuleEvent":
            return None
        capsule = dict(p.capsule)
        kind = capsule.get("type")
        if kind in ("statement", "query", "clarification"):
            capsule.pop("type")  # detection capsules keep type as entity class
        if kind == "statement":
            claim = ClaimCapsule.from_dict(capsule)
            result = agent.ekg.assert_claim(claim)
            return ThoughtsEvent(thoughts={
                "utterance_type": "STATEMENT",
                "claim_graph": result["claim_graph"],
                "thoughts": [t.to_dict() for t in result["thoughts"]],
            })
        if kind == "query":
            q = capsule["query"]
            query = Query(q.get("subject"), q["predicate"], q.get("object"),
                          q.get("yes_no", False))
            agent.ekg.record_question(_question_capsule(agent, capsule, query))
            results = answer_query(query, agent.ekg)
            return ThoughtsEvent(thoughts={
                "utterance_type": "QUESTION",
                "query": q,
                "results": [list(pair) for pair in results],
            })
        if kind == "clarification":
            return ThoughtsEvent(thoughts={
                "utterance_type": "CLARIFICATION", "text": capsule["text"]})
        if kind in ("object", "person") and "label" in capsule:
            perception = PerceptionCapsule.from_dict(capsule)
            agent.ekg.assert_perception(perception)
            agent.perceptions.append((perception.timestamp, perception.label))
            return None
        return None

    return _worker(agent, cc, process)


def _question_capsule(agent, capsule, query):
    utterance = capsule.get("utterance", "")
    subject = TripleTerm(query.subject, "person") if query.subject else None
    # yes/no questions record the open-object form; the utterance label
    # keeps the full question text
    obj = TripleTerm(query.object, "") if query.object and not query.yes_no else None
    return ClaimCapsule(
        chat_id=capsule.get("chat_id", agent.chat_id),
        turn_id=capsule.get("turn", 0),
        author=TripleTerm(capsule.get("speaker", agent.speaker), "person"),
        utterance=utterance,
        utterance_type="QUESTION",
        position=(0, len(utterance)),
        subject=subject,
        predicate=TripleTerm(query.predicate),
        object=obj,
        perspective=Perspective(),
        context_id=agent.context_id,
        timestamp=capsule.get("timestamp", agent.clock.timestamp()),
    )


@component("response-generator")
def build_response_generator(agent, cc):
    def process(event):
        p = event.payload
        if p.TAG != "ThoughtsEvent":
            return None
        body = p.thoughts
        kind = body.get("utterance_type")
        if kind == "STATEMENT":
            text = verbalize_thoughts(body.get("thoughts", []), agent.ekg) or "I see."
        elif kind == "QUESTION":
            q = body["query"]
            query = Query(q.get("subject"), q["predicate"], q.get("object"),
                          q.get("yes_no", False))
            results = [tuple(pair) for pair in body.get("results", [])]
            text = verbalize_answer(results, query, agent.ekg)
        elif kind == "CLARIFICATION":
            text = body.get("text", "")
        else:
            return None
        return TextSignalEvent(signal={
            "id": agent.ids.new_id(), "text": text, "speaker": agent.name})

    return _worker(agent, cc, process)


# -- vision path ---------------------------------------------------------

def _image_detector(agent, cc, detect):
    pending = {}

    def process(event):
        p = event.payload
        if p.TAG == "SignalData" and "path" in p.chunk:
            pending[p.signal_ref] = p.chunk
        elif p.TAG == "SignalStopped" and p.signal_ref in pending:
            chunk = pending.pop(p.signal_ref)
            sidecar = load_sidecar(chunk["path"], dims=chunk.get("dims"))
            mentions, capsules = detect(
                sidecar, p.signal_ref, source=cc.name, timestamp=event.timestamp,
                context_id=agent.context_id, ids=agent.ids)
            return [
                MentionCreated(mention={**mention.to_dict(),
                                        "capsule": capsule.to_dict(),
                                        "sidecar": sidecar})
                for mention, capsule in zip(mentions, capsules)
            ]
        return None

    return _worker(agent, cc, process)


@component("object-recognition")
def build_object_recognition(agent, cc):
    return _image_detector(agent, cc, detect_objects)


@component("face-recognition")
def build_face_recognition(agent, cc):
    def faces_only(sidecar, signal_ref, **kwargs):
        return detect_faces({"faces": sidecar.get("faces", [])}, signal_ref, **kwargs)
    return _image_detector(agent, cc, faces_only)


@component("identification")
def build_identification(agent, cc):
    if "faces" in cc.params:
        registry = FaceRegistry.load(cc.params["faces"])
    else:
        registry = agent.faces

    def process(event):
        p = event.payload
        if p.TAG != "MentionCreated":
            return None
        m = p.mention
        out = []
        if m.get("kind") == "speaker":
            match = m.get("match")
            label = match["name"] if match else "unknown-speaker"
            iri = agent.ekg.mint_instance(label, "person")
            out.append(CapsuleEvent(capsule={
                "label": label, "type": "person", "certainty":
                    match["score"] if match else 0.5,
                "region": {"signal_id": m.get("signal_ref")},
                "context_id": agent.context_id, "timestamp": event.timestamp,
                "source": cc.name, "iri": iri}))
            if match:
                agent.speaker = match["name"]
            return out
        capsule = m.get("capsule")
        if capsule is None:
            return None
        capsule = dict(capsule)
        annotations = m.get("annotations", [])
        face = next((a["value"] for a in annotations if a.get("type") == "face"), None)
        if face is not None:
            index = _face_index(m, capsule)
            embedding = _face_embedding(m, index)
            if embedding is None:
                return None
            result = identify_face(
                {"embedding": embedding, "age": face.get("age"),
                 "gender": face.get("gender")},
                registry, ekg=agent.ekg, ids=agent.ids)
            capsule["label"] = result.label
            capsule["iri"] = result.iri
            identity = {"type": "identity",
                        "value": {"label": result.label, "iri": result.iri,
                                  "score": result.score, "new": result.new},
                        "source": cc.name, "timestamp": event.timestamp}
            out.append(MentionCreated(mention={
                **m, "annotations": annotations + [identity]}))
        else:
            capsule["iri"] = agent.ekg.mint_instance(capsule["label"], capsule["type"])
        out.append(CapsuleEvent(capsule=capsule))
        return out

    return _worker(agent, cc, process)


def _face_index(mention, capsule):
    bbox = capsule.get("region", {}).get("bbox")
    for i, face in enumerate(mention.get("sidecar", {}).get("faces", [])):
        if list(face.get("bbox", [])) == list(bbox or []):
            return i
    return 0


def _face_embedding(mention, index):
    faces = mention.get("sidecar", {}).get("faces", [])
    if index < len(faces):
        return faces[index].get("embedding")
    return None


# -- dialog intents ------------------------------------------------------

@component("greeter")
def build_greeter(agent, cc):
    def process(event):
        p = event.payload
        if p.TAG != "MentionCreated":
            return None
        new = any(a.get("type") == "identity" and a.get("value", {}).get("new")
                  for a in p.mention.get("annotations", []))
        if not new:
            return None
        return TextSignalEvent(signal={
            "id": agent.ids.new_id(),
            "text": "Hi there! I don't believe we have met. What is your name?",
            "speaker": agent.name})

    return _worker(agent, cc, process)


@component("about-agent")
def build_about_agent(agent, cc):
    response = cc.params.get(
        "response", load_intention_config().get(
            "about_agent_response", "I am an agent."))

    def process(event):
        if event.payload.TAG != "TextSignalEvent":
            return None
        return TextSignalEvent(signal={
            "id": agent.ids.new_id(), "text": response, "speaker": agent.name})

    return _worker(agent, cc, process)


@component("scene-describer")
def build_scene_describer(agent, cc):
    window_ms = int(cc.params.get(
        "recency_window_ms", load_intention_config().get("recency_window_ms", 120000)))

    def process(event):
        if event.payload.TAG != "TextSignalEvent":
            return None
        now = event.timestamp
        recent = sorted({label for ts, label in agent.perceptions
                         if now - ts <= window_ms})
        if recent:
            text = "I see " + ", ".join(f"a {label}" for label in recent) + "."
        else:
            text = "I don't see anything right now."
        return TextSignalEvent(signal={
            "id": agent.ids.new_id(), "text": text, "speaker": agent.name})

    return _worker(agent, cc, process)


@component("farewell")
def build_farewell(agent, cc):
    def process(event):
        if event.payload.TAG != "TextSignalEvent":
            return None
        agent.request_shutdown()
        return TextSignalEvent(signal={
            "id": agent.ids.new_id(), "text": "Goodbye! It was nice talking to you.",
            "speaker": agent.name})

    return _worker(agent, cc, process)


@component("consent-handler")
def build_consent_handler(agent, cc):
    def process(event):
        p = event.payload
        if p.TAG != "ControlCommand":
            return None
        if p.command == "consent-granted":
            agent.consent = True
            if agent.scenario is None:
                agent.start_session()
        elif p.command == "consent-denied":
            agent.consent = False
            agent.forget_session()
        return None

    return _worker(agent, cc, process)


# -- bookkeeping ---------------------------------------------------------

@component("storage-writer")
def build_storage_writer(agent, cc):
    from combus.runtime.storage import StorageWriter
    writer = StorageWriter(agent)
    return _worker(agent, cc, writer.process)


@component("intention-manager")
def build_intention_manager(agent, cc):
    def process(event):
        return list(agent.manager.evaluate(event))

    return _worker(agent, cc, process)
